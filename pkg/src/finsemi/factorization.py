"""Left basic factorizations of words and omega-terms.

The left basic factorization of u splits it as x a y at the first
position where the accumulated letter set completes the content of u
(a not in c(x), c(xa) = c(u)); iterating on remainders while the content
stays full yields the iterated left basic factorization, which is finite
for words and may be infinite for omega-terms.  The length of the
iterated factorization of the window image decides regularity over
DS * D_k; comparing factorizations coinductively gives the R word
problem used elsewhere.
"""

from dataclasses import dataclass

from . import dk
from . import terms as tm
from .errors import UnsupportedShape
from .pseudovarieties import (
    PROVED,
    UNKNOWN,
    canon,
    proves_equal_over_S,
    refuted,
)


@dataclass
class LbfResult:
    """u = x a y with a not in c(x) and c(xa) = c(u); x and y may be empty
    (None for terms, () for words)."""

    x: object
    a: object
    y: object


@dataclass
class IlbfResult:
    outcome: str  # 'finite' | 'infinite' | 'unknown'
    factors: list  # of (u_i, a_i)
    remainder: object = None
    witness: object = None
    cap: int = 0

    @property
    def length(self):
        return len(self.factors) if self.outcome == "finite" else None


@dataclass
class Ilbf2Result:
    outcome: str  # 'finite' | 'infinite' | 'unknown'
    factors: list  # of u_i
    q: object = None
    witness: object = None

    @property
    def length(self):
        return len(self.factors) if self.outcome == "finite" else None


# ---------------------------------------------------------------------------
# Words


def _as_word(u):
    return tuple(u) if not isinstance(u, tuple) else u


def lbf(u):
    """Left basic factorization of a nonempty word."""
    w = _as_word(u)
    if not w:
        raise ValueError("lbf of the empty word")
    full = set(w)
    acc = set()
    for i, ch in enumerate(w):
        if ch not in acc:
            acc.add(ch)
            if acc == full:
                return LbfResult(w[:i], ch, w[i + 1:])
    raise AssertionError("unreachable")


def ilbf(u):
    """Iterated left basic factorization of a word (always finite)."""
    w = _as_word(u)
    full = set(w)
    factors = []
    rem = w
    while rem and set(rem) == full:
        res = lbf(rem)
        factors.append((res.x, res.a))
        rem = res.y
    return IlbfResult("finite", factors, remainder=rem)


# ---------------------------------------------------------------------------
# Omega-terms


def _exp_minus_one(e):
    if isinstance(e, int):
        return e - 1
    return e.shifted(-1)


def _split_factors(factors, acc, full):
    """Walk a factor list accumulating content; split at the completing
    letter, cutting inside powers via u^e = u . u^(e-1)."""
    x_parts = []
    for idx, f in enumerate(factors):
        fc = tm.content(f)
        if fc <= acc:
            x_parts.append(f)
            continue
        if not (acc | fc) >= full:
            x_parts.append(f)
            acc = acc | fc
            continue
        rest = list(factors[idx + 1:])
        if isinstance(f, tm.Letter):
            return x_parts, f.symbol, rest
        if isinstance(f, tm.Power):
            inner = f.base.parts if isinstance(f.base, tm.Concat) else [f.base]
            xb, a, yb = _split_factors(list(inner), acc, full)
            e1 = _exp_minus_one(f.exp)
            tail = [] if (isinstance(e1, int) and e1 == 0) else [tm.power(f.base, e1)]
            return x_parts + xb, a, yb + tail + rest
        # f is a Concat (only when called on a power base)
        xb, a, yb = _split_factors(list(f.parts), acc, full)
        return x_parts + xb, a, yb + rest
    raise UnsupportedShape("content never completed during the scan")


def lbf_term(t):
    """Left basic factorization of a nonempty omega-term."""
    full = tm.content(t)
    factors = list(t.parts) if isinstance(t, tm.Concat) else [t]
    x_parts, a, y_parts = _split_factors(factors, set(), full)
    x = tm.concat(*x_parts) if x_parts else None
    y = tm.concat(*y_parts) if y_parts else None
    return LbfResult(x, a, y)


def _zero_offsets(t):
    if isinstance(t, tm.Letter):
        return t
    if isinstance(t, tm.Concat):
        return tm.concat(*[_zero_offsets(p) for p in t.parts])
    e = t.exp if isinstance(t.exp, int) else tm.Exponent(t.exp.kind, t.exp.p, 0)
    return tm.power(_zero_offsets(t.base), e)


def term_signature(t):
    """Normal form with limit-exponent offsets collapsed; sound for cycle
    detection since the factorization scan never consults the offsets,
    and sound for R since R-trivial semigroups are aperiodic."""
    return canon(_zero_offsets(canon(t)))


def ilbf_term(t, cap=60):
    """Iterated left basic factorization of an omega-term: finite,
    infinite (a remainder signature with full content recurred), or
    unknown at the cap."""
    full = tm.content(t)
    factors = []
    seen = set()
    rem = t
    for _ in range(cap):
        if rem is None:
            return IlbfResult("finite", factors, remainder=None)
        if tm.content(rem) != full:
            return IlbfResult("finite", factors, remainder=rem)
        sig = term_signature(rem)
        if sig in seen:
            return IlbfResult("infinite", factors, witness=sig)
        seen.add(sig)
        res = lbf_term(rem)
        factors.append((res.x, res.a))
        rem = res.y
    return IlbfResult("unknown", factors, cap=cap)


# ---------------------------------------------------------------------------
# ilbf2: factorizations through the window map at k = 1


def _unphi_word(blocks):
    return (blocks[0][0],) + tuple(b[-1] for b in blocks)


def _lastmap(t):
    if isinstance(t, tm.Letter):
        return tm.Letter(t.symbol[-1])
    if isinstance(t, tm.Concat):
        return tm.concat(*[_lastmap(p) for p in t.parts])
    return tm.power(_lastmap(t.base), t.exp)


def _unphi_term(t):
    """Preimage of a well-formed window term under phi_1: the first letter
    of the first block followed by the last letters of all blocks."""
    first_block = tm.prefix_word(t, 1)[0][0]
    return tm.concat(tm.Letter(first_block[0]), _lastmap(t))


def _ilbf2_degenerate(u, img_content, length, is_word):
    # c(phi_1(u)) is a single block (x, y): either u = xy, or x = y and
    # every factor is the letter x
    (x, y) = next(iter(img_content))
    if x != y:
        # u is the two-letter word xy
        q = (tm.tau_k(u, 1)[0]) if not is_word else u[-1]
        u1 = (x,) if is_word else tm.Letter(x)
        return Ilbf2Result("finite", [u1], q=(q,) if is_word else tm.Letter(q))
    u_i = (x,) if is_word else tm.Letter(x)
    if length is None:
        return Ilbf2Result("infinite", [], q=None, witness=u_i)
    factors = [u_i] * length
    q = (x,) if is_word else tm.Letter(x)
    return Ilbf2Result("finite", factors, q=q)


def ilbf2(u, cap=60):
    """The induced factorization through phi_1: factors u_i with
    phi_1(u_i) the x-parts of ilbf(phi_1(u)), plus the final factor q.

    Words always come back finite; omega-terms may be infinite or unknown."""
    is_word = not isinstance(u, tm.Term)
    if is_word:
        w = _as_word(u)
        if len(w) < 2:
            raise ValueError("ilbf2 requires |u| >= 2")
        img = dk.phi_k(w, 1).blocks
        res = ilbf(img)
        img_content = set(img)
        if len(img_content) == 1:
            return _ilbf2_degenerate(w, img_content, len(res.factors), True)
        factors = [_unphi_word(x) for (x, _a) in res.factors]
        if res.remainder:
            q = _unphi_word(res.remainder)
        else:
            q = (w[-1],)
        return Ilbf2Result("finite", factors, q=q)
    img = dk.phi_k_term(u, 1)
    if img is None:
        raise ValueError("ilbf2 requires a term longer than 1")
    img_content = tm.content(img)
    res = ilbf_term(img, cap=cap)
    if len(img_content) == 1:
        return _ilbf2_degenerate(
            u, img_content, res.length if res.outcome == "finite" else None, False)
    if res.outcome == "unknown":
        return Ilbf2Result("unknown", [], witness=res.cap)
    factors = [_unphi_term(x) if x is not None else None for (x, _a) in res.factors]
    if any(f is None for f in factors):
        raise UnsupportedShape("empty x-part outside the degenerate case")
    if res.outcome == "infinite":
        return Ilbf2Result("infinite", factors, witness=res.witness)
    if res.remainder is not None:
        q = _unphi_term(res.remainder)
    else:
        q = tm.Letter(tm.tau_k(u, 1)[0])
    return Ilbf2Result("finite", factors, q=q)


# ---------------------------------------------------------------------------
# Regularity over DS * D_k and the R word problem


def ds_dk_regular(t, k, cap=60):
    """Regularity over DS * D_k: Proved iff the iterated left basic
    factorization of the window image is infinite, Refuted iff finite."""
    if not isinstance(t, tm.Term):
        if not dk.phi_k(t, k).blocks:
            raise ValueError("ds_dk_regular requires input longer than k")
        return refuted("finite words have finite factorizations")
    img = dk.phi_k_term(t, k)
    if img is None:
        raise ValueError("ds_dk_regular requires a term longer than k")
    res = ilbf_term(img, cap=cap)
    if res.outcome == "infinite":
        return PROVED
    if res.outcome == "finite":
        return refuted(res)
    return UNKNOWN


def _r_members():
    from .corpus import all_semigroups_upto
    from .pseudovarieties import member
    return [S for S in all_semigroups_upto(4) if member(S, "R")]


_r_bank = None


def _refuted_by_r_corpus(u, v):
    global _r_bank
    if _r_bank is None:
        _r_bank = _r_members()
    letters = tuple(sorted(tm.content(u) | tm.content(v), key=str))
    if len(letters) > 3:
        return None
    pi = tm.PseudoIdentity(u, v, letters)
    for S in _r_bank:
        ok, asg = tm.satisfies(S, pi, witness=True)
        if not ok:
            return {"semigroup": S, "assignment": asg}
    return None


def r_equal(u, v, cap=40):
    """Equality over R by coinductive comparison of left basic
    factorizations, with refutation via the R-corpus."""
    memo = set()

    def go(x, y, depth):
        if x is None and y is None:
            return PROVED
        if x is None or y is None:
            return refuted("one side empty")
        if tm.content(x) != tm.content(y):
            return refuted("contents differ")
        sx, sy = term_signature(x), term_signature(y)
        if sx == sy:
            return PROVED
        if depth > cap:
            return UNKNOWN
        if (sx, sy) in memo:
            return PROVED  # coinductive closure
        memo.add((sx, sy))
        lx, ly = lbf_term(x), lbf_term(y)
        if lx.a != ly.a:
            return refuted(f"completing letters {lx.a} != {ly.a}")
        rx = go(lx.x, ly.x, depth + 1)
        if rx.refuted:
            return rx
        ry = go(lx.y, ly.y, depth + 1)
        if ry.refuted:
            return ry
        if rx.proved and ry.proved:
            return PROVED
        return UNKNOWN

    if not isinstance(u, tm.Term):
        u = tm.word_term(_as_word(u))
    if not isinstance(v, tm.Term):
        v = tm.word_term(_as_word(v))
    if proves_equal_over_S(u, v, max_order=0).proved:
        return PROVED
    w = _refuted_by_r_corpus(u, v)
    if w is not None:
        return refuted(w)
    return go(u, v, 0)
