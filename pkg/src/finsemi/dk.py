"""The window calculus for semidirect products with D_k.

phi_k reads the consecutive length-(k+1) factors of a word; words of
length <= k map to the empty window word.  The map satisfies the product
rule phi_k(uv) = phi_k(u b_k(v)) . phi_k(v) = phi_k(u) . phi_k(t_k(u) v)
(b_k / t_k the length-k prefix/suffix), which is what makes a structural
lifting to omega-terms possible.

Satisfaction u = v over V * D_k is decided by the triple criterion:
equal length-k prefixes, equal length-k suffixes, and V |= the window
images.  Word images live in a finite relatively free object whenever
V's free objects are finite (Sl, K_m, D_m, N_m, D_j); its elements are
short words plus (prefix, suffix, V-value) triples.
"""

from dataclasses import dataclass
from itertools import product

from . import semigroups as sg
from . import terms as tm
from .errors import BudgetExceeded, PreconditionViolated, UnsupportedShape
from .pseudovarieties import (
    PROVED,
    get_pseudovariety,
    refuted,
    word_problem_equal,
)


def _as_word(u):
    if isinstance(u, str):
        return tuple(u)
    return tuple(u)


@dataclass(frozen=True)
class WindowWord:
    """A word over the block alphabet A^(k+1); consecutive blocks overlap
    in exactly k letters."""

    k: int
    blocks: tuple

    def __post_init__(self):
        for b1, b2 in zip(self.blocks, self.blocks[1:]):
            if b1[1:] != b2[:-1]:
                raise ValueError(f"blocks {b1} and {b2} do not overlap in {self.k}")

    def __len__(self):
        return len(self.blocks)

    def spelled(self):
        return ["".join(map(str, b)) for b in self.blocks]


def phi_k(u, k):
    """Window word of a plain word: empty when |u| <= k."""
    w = _as_word(u)
    if len(w) <= k:
        return WindowWord(k, ())
    return WindowWord(k, tuple(w[i:i + k + 1] for i in range(len(w) - k)))


def c_k1(u, k):
    """Content of the window image: the set of length-(k+1) factors."""
    if isinstance(u, tm.Term):
        img = phi_k_term(u, k)
        return frozenset() if img is None else tm.content(img)
    return frozenset(phi_k(u, k).blocks)


# ---------------------------------------------------------------------------
# Structural lifting of phi_k to omega-terms


def _cat(*pieces):
    parts = [p for p in pieces if p is not None]
    if not parts:
        return None
    return tm.concat(*parts)


def _word_image(w, k):
    blocks = phi_k(w, k).blocks
    return tm.word_term(blocks) if blocks else None


def _exp_minus_one(e):
    if isinstance(e, int):
        return e - 1
    return e.shifted(-1)


def _phi_prefixed(prefix, f, k):
    """phi_k(prefix . f) for a word prefix of length <= k."""
    if not prefix:
        return phi_k_term(f, k)
    w = tm.is_finite_word(f)
    if w is not None:
        return _word_image(tuple(prefix) + w, k)
    if isinstance(f, tm.Power):
        head = _word_image(tuple(prefix) + tm.beta_k(f, k), k)
        return _cat(head, phi_k_term(f, k))
    if isinstance(f, tm.Concat):
        return phi_k_term(tm.concat(tm.word_term(prefix), f), k)
    raise UnsupportedShape(f"cannot lift {f!r}")


def phi_k_term(t, k):
    """The window image of an omega-term, as a term over block letters
    (None for the empty image).  Blocks are tuples of base letters."""
    w = tm.is_finite_word(t)
    if w is not None:
        return _word_image(w, k)
    if isinstance(t, tm.Concat):
        acc = phi_k_term(t.parts[0], k)
        suffix = tm.tau_k(t.parts[0], k)
        for f in t.parts[1:]:
            acc = _cat(acc, _phi_prefixed(suffix, f, k))
            suffix = tm.tau_k(tm.concat(tm.word_term(suffix), f), k)
        return acc
    if isinstance(t, tm.Power):
        base, exp = t.base, t.exp
        head, exact = tm.prefix_word(base, k + 1)
        if exact and len(head) <= k:
            # short word base: raise it to a power of length >= k+1 first
            wbase = head
            j = -(-(k + 1) // len(wbase))
            if isinstance(exp, int):
                q2, r = divmod(exp, j)
            elif exp.kind == "omega":
                q2, r = divmod(exp.offset, j)
                q2 = tm.omega(q2)
            else:
                raise UnsupportedShape(
                    "p^omega power of a base shorter than k+1 is not liftable")
            pieces = [tm.power(tm.word_term(wbase * j), q2)] if q2 != 0 else []
            if isinstance(q2, int) and q2 == 0:
                pieces = []
            if r:
                pieces.append(tm.word_term(wbase * r))
            return phi_k_term(tm.concat(*pieces), k)
        # base of length >= k+1: phi(u^e) = phi(u b_k(u))^(e-1) . phi(u)
        core = phi_k_term(tm.concat(base, tm.word_term(tm.beta_k(base, k))), k)
        tail = phi_k_term(base, k)
        return _cat(tm.power(core, _exp_minus_one(exp)), tail)
    # a single letter has an empty image for k >= 1
    return None if k >= 1 else tm.Letter((t.symbol,))


# ---------------------------------------------------------------------------
# The triple criterion


def _criterion_characterizes(V):
    # The monoid hypothesis makes the prefix/suffix components recoverable
    # from V * D_k; for K, D and N the V side itself carries unbounded
    # prefix/suffix memory, so the criterion stays exact there too.  For
    # the bounded families (D_j, K_j, N_j) it is genuinely finer than
    # V * D_k equality.
    return V.has_nontrivial_monoid or V.name in ("K", "D", "N")


def vdk_satisfies(V, k, u, v, require_nontrivial_monoid=True):
    """Does V * D_k satisfy u = v, by the triple criterion: equal
    length-k prefixes and suffixes, and V |= phi_k(u) = phi_k(v).

    When the criterion does not characterize V * D_k (bounded-memory V
    like a raw D_j) the call raises unless `require_nontrivial_monoid`
    is disabled; the verdict is then still the sound triple-criterion
    comparison (Proved implies V * D_k |= u = v)."""
    if isinstance(V, str):
        V = get_pseudovariety(V)
    if require_nontrivial_monoid and not _criterion_characterizes(V):
        raise PreconditionViolated(
            f"{V.name} contains no nontrivial monoid; the triple criterion "
            f"does not characterize {V.name} * D_k")
    if not isinstance(u, tm.Term):
        u = tm.word_term(_as_word(u))
    if not isinstance(v, tm.Term):
        v = tm.word_term(_as_word(v))
    if tm.beta_k(u, k) != tm.beta_k(v, k):
        return refuted("length-k prefixes differ")
    if tm.tau_k(u, k) != tm.tau_k(v, k):
        return refuted("length-k suffixes differ")
    pu, pv_ = phi_k_term(u, k), phi_k_term(v, k)
    if pu is None and pv_ is None:
        return PROVED
    if pu is None or pv_ is None:
        return refuted("one window image is empty, the other is not")
    return word_problem_equal(V, pu, pv_)


# ---------------------------------------------------------------------------
# Relatively free objects for locally finite V * D_k


class _ValueAlgebra:
    """The finite free object of V over the block alphabet, reduced to the
    value of a nonempty block word and a value multiplication."""

    def __init__(self, V):
        kind = V.free_value_kind
        if kind is None:
            raise BudgetExceeded(f"{V.name} has no finite free-object backend")
        self.kind = kind
        self.bound = V.word_problem_bound

    def of_blocks(self, blocks):
        if self.kind == "content":
            return frozenset(blocks)
        if self.kind == "prefix":
            return tuple(blocks[:self.bound])
        if self.kind == "suffix":
            return tuple(blocks[-self.bound:])
        # bounded_word: zero once length reaches the bound
        return tuple(blocks) if len(blocks) < self.bound else "0"

    def mul(self, x, y):
        if self.kind == "content":
            return x | y
        if self.kind == "prefix":
            return (x + y)[:self.bound]
        if self.kind == "suffix":
            return (x + y)[-self.bound:]
        if x == "0" or y == "0" or len(x) + len(y) >= self.bound:
            return "0"
        return x + y


class VdkImages:
    """The canonical map of words into the triple algebra of V * D_k:
    short words (length <= k) plus triples (b_k, t_k, [phi_k]_V), with
    multiplication induced by the product rule.  No materialization."""

    def __init__(self, V, k):
        if isinstance(V, str):
            V = get_pseudovariety(V)
        self.V = V
        self.k = k
        self.values = _ValueAlgebra(V)

    def _triple_of_word(self, w):
        k = self.k
        return ("triple", w[:k], w[-k:], self.values.of_blocks(phi_k(w, k).blocks))

    def _mul(self, e1, e2):
        k = self.k
        vals = self.values
        if e1[0] == "short" and e2[0] == "short":
            w = e1[1] + e2[1]
            return ("short", w) if len(w) <= k else self._triple_of_word(w)
        if e1[0] == "short":
            _, p, s, f = e2
            w = e1[1] + p
            return ("triple", w[:k],
                    s, vals.mul(vals.of_blocks(phi_k(w, k).blocks), f))
        if e2[0] == "short":
            _, p, s, f = e1
            w = s + e2[1]
            return ("triple", p, w[-k:],
                    vals.mul(f, vals.of_blocks(phi_k(w, k).blocks)))
        _, p1, s1, f1 = e1
        _, p2, s2, f2 = e2
        bridge = vals.of_blocks(phi_k(s1 + p2, k).blocks)
        return ("triple", p1, s2, vals.mul(vals.mul(f1, bridge), f2))

    def image_of_word(self, word):
        """Fold a word through the letter images; the canonical homomorphism."""
        w = _as_word(word)
        acc = ("short", (w[0],))
        for a in w[1:]:
            acc = self._mul(acc, ("short", (a,)))
        return acc


class FreeDkObject(VdkImages):
    """The triple algebra materialized over a fixed alphabet: the
    relatively free object with its multiplication table."""

    def __init__(self, V, alphabet, k, budget=4096):
        super().__init__(V, k)
        self.alphabet = tuple(alphabet)
        elems = [("short", (a,)) for a in self.alphabet]
        index = {e: i for i, e in enumerate(elems)}
        frontier = list(elems)
        while frontier:
            new = []
            for e1 in frontier:
                for e2 in list(elems):
                    for prod_ in (self._mul(e1, e2), self._mul(e2, e1)):
                        if prod_ not in index:
                            if len(elems) >= budget:
                                raise BudgetExceeded(
                                    f"free object exceeds {budget} elements")
                            index[prod_] = len(elems)
                            elems.append(prod_)
                            new.append(prod_)
            frontier = new
        self.elements = elems
        self.index = index
        table = [[index[self._mul(e1, e2)] for e2 in elems] for e1 in elems]
        self.semigroup = sg.FiniteSemigroup(table, check=False)
        self.generator_indices = tuple(index[("short", (a,))] for a in self.alphabet)


def free_object_vdk(V, alphabet, k, budget=4096):
    if len(tuple(alphabet)) > 3 or k > 2:
        raise BudgetExceeded("free objects guarded to |A| <= 3, k <= 2")
    return FreeDkObject(V, alphabet, k, budget=budget)


def member_vdk(S, V, k, budget=4096):
    """Whether S lies in V * D_k, for V with a finite free-object backend:
    S must be a quotient of the relatively free object on as many letters
    as a minimal generating set of S."""
    gens = sg.minimal_generating_set(S)
    g = len(gens)
    if g > 3:
        raise BudgetExceeded("member_vdk requires a generating set of size <= 3")
    letters = ("a", "b", "c")[:g]
    F = free_object_vdk(V, letters, k, budget=budget)
    T = F.semigroup
    gen_idx = F.generator_indices
    for tup in product(range(S.order), repeat=g):
        if sg.generate(S, tup).order != S.order:
            continue
        image = {}
        ok = True
        for fi, s in zip(gen_idx, tup):
            image[fi] = s
        frontier = list(image.items())
        while frontier and ok:
            new = []
            items = list(image.items())
            for (t1, s1) in frontier:
                for (t2, s2) in items:
                    for (tp, sp) in ((T.table[t1][t2], S.table[s1][s2]),
                                     (T.table[t2][t1], S.table[s2][s1])):
                        prev = image.get(tp)
                        if prev is None:
                            image[tp] = sp
                            new.append((tp, sp))
                        elif prev != sp:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            frontier = new
        if ok:
            return True
    return False
