"""Finite semigroup kernel.

Semigroups are multiplication tables over dense element indices 0..n-1.
Everything downstream (Green's relations, quotients, duals, products,
division search, the named catalog) works on this representation.
Instances are immutable after construction; derived data (Green's
structure, idempotents, cyclic index/period) is computed once and cached.
"""

from itertools import combinations, product

from .errors import (
    BudgetExceeded,
    IncompatiblePartition,
    NonAssociative,
    NotIdempotent,
    OutOfRangeEntry,
    UnknownName,
)


class FiniteSemigroup:
    """A finite semigroup given by its Cayley table.

    table[x][y] is the index of the product xy.  Labels are display
    metadata only; generators, when given, record a preferred generating
    subset (not validated against closure).
    """

    def __init__(self, table, labels=None, generators=None, check=True):
        table = tuple(tuple(row) for row in table)
        n = len(table)
        if check:
            for row in table:
                if len(row) != n:
                    raise OutOfRangeEntry("table is not square")
                for v in row:
                    if not isinstance(v, int) or not 0 <= v < n:
                        raise OutOfRangeEntry(f"entry {v!r} out of range [0, {n})")
            for x in range(n):
                for y in range(n):
                    xy = table[x][y]
                    for z in range(n):
                        if table[xy][z] != table[x][table[y][z]]:
                            raise NonAssociative(x, y, z)
        self.order = n
        self.table = table
        self.labels = tuple(labels) if labels is not None else None
        self.generators = tuple(generators) if generators is not None else None
        self._green = None
        self._idempotents = None
        self._index_period = {}
        self._canon = None

    def mul(self, x, y):
        return self.table[x][y]

    def prod(self, xs):
        it = iter(xs)
        acc = next(it)
        for x in it:
            acc = self.table[acc][x]
        return acc

    def label(self, x):
        return self.labels[x] if self.labels else str(x)

    def __repr__(self):
        return f"FiniteSemigroup(order={self.order})"

    def __eq__(self, other):
        return isinstance(other, FiniteSemigroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def identity(self):
        """The two-sided identity element, or None."""
        for e in range(self.order):
            if all(self.table[e][x] == x == self.table[x][e] for x in range(self.order)):
                return e
        return None

    def is_monoid(self):
        return self.identity() is not None

    def idempotents(self):
        if self._idempotents is None:
            self._idempotents = frozenset(
                e for e in range(self.order) if self.table[e][e] == e
            )
        return self._idempotents

    def power(self, x, n):
        """x^n for n >= 1 by binary exponentiation."""
        if n < 1:
            raise ValueError("power requires n >= 1")
        acc = None
        base = x
        while n:
            if n & 1:
                acc = base if acc is None else self.table[acc][base]
            base = self.table[base][base]
            n >>= 1
        return acc

    def index_period(self, x):
        """(index i, period p) of the cyclic subsemigroup of x.

        x, x^2, ... x^(i-1) are distinct and x^(i+p) = x^i with p minimal.
        """
        cached = self._index_period.get(x)
        if cached is not None:
            return cached
        seen = {}
        cur = x
        k = 1
        while cur not in seen:
            seen[cur] = k
            cur = self.table[cur][x]
            k += 1
        i = seen[cur]
        p = k - i
        self._index_period[x] = (i, p)
        return (i, p)

    def omega_power(self, x, offset=0):
        """x^(omega+offset): the limit of x^(n!+offset) in this semigroup."""
        i, p = self.index_period(x)
        n = p
        while n < i + abs(offset) + p:
            n += p
        return self.power(x, n + offset)

    def green(self):
        if self._green is None:
            self._green = _compute_green(self)
        return self._green

    def to_json_dict(self):
        d = {"order": self.order, "table": [list(row) for row in self.table]}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        if self.generators is not None:
            d["generators"] = list(self.generators)
        return d

    @classmethod
    def from_json_dict(cls, d):
        sgp = from_table(d["table"], labels=d.get("labels"))
        if d.get("generators") is not None:
            sgp.generators = tuple(d["generators"])
        if "order" in d and d["order"] != sgp.order:
            raise OutOfRangeEntry("declared order does not match table")
        return sgp


def from_table(table, labels=None, generators=None):
    """Validate a square matrix as a semigroup table."""
    return FiniteSemigroup(table, labels=labels, generators=generators, check=True)


class GreenData:
    """Green's relation data for one semigroup.

    Partitions are tuples of frozensets; *_class_of maps an element index
    to the id of its class.  j_order holds the pairs (i, j) with J_i <= J_j
    in the J-class order; regular_j is the set of J-class ids containing
    an idempotent.
    """

    def __init__(self, r_classes, l_classes, j_classes, h_classes, j_order, regular_j,
                 r_class_of, l_class_of, j_class_of, h_class_of):
        self.r_classes = r_classes
        self.l_classes = l_classes
        self.j_classes = j_classes
        self.h_classes = h_classes
        self.j_order = j_order
        self.regular_j = regular_j
        self.r_class_of = r_class_of
        self.l_class_of = l_class_of
        self.j_class_of = j_class_of
        self.h_class_of = h_class_of


def _partition_by(keys):
    groups = {}
    for x, k in enumerate(keys):
        groups.setdefault(k, []).append(x)
    classes = tuple(frozenset(g) for g in groups.values())
    class_of = [0] * len(keys)
    for ci, cls in enumerate(classes):
        for x in cls:
            class_of[x] = ci
    return classes, tuple(class_of)


def _compute_green(S):
    n = S.order
    t = S.table
    rng = range(n)

    r_ideal = [frozenset({x} | {t[x][s] for s in rng}) for x in rng]
    l_ideal = [frozenset({x} | {t[s][x] for s in rng}) for x in rng]
    j_ideal = []
    for x in rng:
        two = {x}
        two.update(t[x][s] for s in rng)
        two.update(t[s][x] for s in rng)
        for s in rng:
            xs = t[s][x]
            two.update(t[xs][u] for u in rng)
        j_ideal.append(frozenset(two))

    r_classes, r_of = _partition_by(r_ideal)
    l_classes, l_of = _partition_by(l_ideal)
    j_classes, j_of = _partition_by(j_ideal)
    h_classes, h_of = _partition_by(list(zip(r_of, l_of)))

    # R and L refine J; H = R meet L by construction.
    for x in rng:
        for y in rng:
            if r_of[x] == r_of[y] or l_of[x] == l_of[y]:
                assert j_of[x] == j_of[y], "R/L do not refine J"

    j_order = set()
    for ji, ci in enumerate(j_classes):
        xi = next(iter(ci))
        for jj, cj in enumerate(j_classes):
            if xi in j_ideal[next(iter(cj))]:
                j_order.add((ji, jj))

    idem = S.idempotents()
    regular_j = frozenset(j_of[e] for e in idem)
    # A regular J-class contains an idempotent in every one of its R-classes.
    for ji in regular_j:
        for ri, rcls in enumerate(r_classes):
            if rcls and j_of[next(iter(rcls))] == ji:
                assert any(e in idem for e in rcls), "regular J-class with idempotent-free R-class"

    return GreenData(r_classes, l_classes, j_classes, h_classes,
                     frozenset(j_order), regular_j, r_of, l_of, j_of, h_of)


def green(S):
    return S.green()


def idempotents(S):
    return S.idempotents()


def local_monoid(S, e):
    """The local monoid eSe, as a FiniteSemigroup with identity e."""
    if S.table[e][e] != e:
        raise NotIdempotent(f"element {e} is not idempotent")
    elems = sorted({S.table[S.table[e][x]][e] for x in range(S.order)})
    idx = {x: i for i, x in enumerate(elems)}
    table = [[idx[S.table[x][y]] for y in elems] for x in elems]
    labels = [S.label(x) for x in elems] if S.labels else None
    return FiniteSemigroup(table, labels=labels, check=False)


def dual(S):
    """The opposite semigroup: s *_op t = t * s (transposed table)."""
    n = S.order
    table = [[S.table[y][x] for y in range(n)] for x in range(n)]
    return FiniteSemigroup(table, labels=S.labels, generators=S.generators, check=False)


def direct_product(S, T):
    n, m = S.order, T.order
    table = [[0] * (n * m) for _ in range(n * m)]
    for (x1, y1) in product(range(n), range(m)):
        a = x1 * m + y1
        for (x2, y2) in product(range(n), range(m)):
            b = x2 * m + y2
            table[a][b] = S.table[x1][x2] * m + T.table[y1][y2]
    labels = None
    if S.labels and T.labels:
        labels = [f"({S.label(x)},{T.label(y)})" for x in range(n) for y in range(m)]
    return FiniteSemigroup(table, labels=labels, check=False)


class Congruence:
    """A partition of a semigroup's elements compatible with multiplication."""

    def __init__(self, semigroup, classes, check=True):
        self.semigroup = semigroup
        classes = tuple(sorted((frozenset(c) for c in classes), key=lambda c: min(c)))
        self.classes = classes
        class_of = [None] * semigroup.order
        for ci, cls in enumerate(classes):
            for x in cls:
                if x < 0 or x >= semigroup.order or class_of[x] is not None:
                    raise IncompatiblePartition("not a partition of the element set")
                class_of[x] = ci
        if any(c is None for c in class_of):
            raise IncompatiblePartition("partition does not cover all elements")
        self.class_of = tuple(class_of)
        if check and not self._compatible():
            raise IncompatiblePartition("partition is not compatible with multiplication")

    def _compatible(self):
        t = self.semigroup.table
        cof = self.class_of
        for cls in self.classes:
            rep = min(cls)
            for x in cls:
                for y in range(self.semigroup.order):
                    if cof[t[x][y]] != cof[t[rep][y]] or cof[t[y][x]] != cof[t[y][rep]]:
                        return False
        return True

    def __eq__(self, other):
        return isinstance(other, Congruence) and self.classes == other.classes

    def __hash__(self):
        return hash(self.classes)

    def __len__(self):
        return len(self.classes)

    def is_identity(self):
        return len(self.classes) == self.semigroup.order


def identity_congruence(S):
    return Congruence(S, [{x} for x in range(S.order)], check=False)


def universal_congruence(S):
    return Congruence(S, [set(range(S.order))], check=False)


def congruence_from_pairs(S, pairs):
    """Smallest congruence containing the given element pairs."""
    parent = list(range(S.order))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[rb] = ra
        return True

    queue = [p for p in pairs if union(*p)]
    while queue:
        x, y = queue.pop()
        for s in range(S.order):
            for a, b in ((S.table[s][x], S.table[s][y]), (S.table[x][s], S.table[y][s])):
                if find(a) != find(b):
                    union(a, b)
                    queue.append((a, b))
    groups = {}
    for x in range(S.order):
        groups.setdefault(find(x), set()).add(x)
    return Congruence(S, groups.values(), check=False)


def quotient(S, cong):
    """The quotient semigroup S/cong (classes multiply via representatives)."""
    if cong.semigroup is not S and cong.semigroup.table != S.table:
        raise IncompatiblePartition("congruence belongs to a different semigroup")
    reps = [min(c) for c in cong.classes]
    cof = cong.class_of
    table = [[cof[S.table[x][y]] for y in reps] for x in reps]
    labels = None
    if S.labels:
        labels = ["{" + ",".join(S.label(x) for x in sorted(c)) + "}" for c in cong.classes]
    return FiniteSemigroup(table, labels=labels, check=False)


def adjoin_identity(S):
    """S^I: a fresh identity is adjoined unconditionally."""
    n = S.order
    table = [list(row) + [x] for x, row in enumerate(S.table)]
    table.append(list(range(n + 1)))
    labels = (list(S.labels) + ["I"]) if S.labels else None
    return FiniteSemigroup(table, labels=labels, check=False)


def adjoin_identity_if_missing(S):
    """S^1: adjoin an identity only when S is not already a monoid."""
    return S if S.is_monoid() else adjoin_identity(S)


def generate(ambient, subset):
    """Subsemigroup of `ambient` generated by `subset`, reindexed."""
    subset = list(subset)
    if not subset:
        raise ValueError("generate requires a nonempty subset")
    elems = []
    seen = set()
    for x in subset:
        if x not in seen:
            seen.add(x)
            elems.append(x)
    frontier = list(elems)
    while frontier:
        new = []
        for x in frontier:
            for y in elems:
                for z in (ambient.table[x][y], ambient.table[y][x]):
                    if z not in seen:
                        seen.add(z)
                        new.append(z)
        elems.extend(new)
        frontier = new
    elems = sorted(seen)
    idx = {x: i for i, x in enumerate(elems)}
    table = [[idx[ambient.table[x][y]] for y in elems] for x in elems]
    labels = [ambient.label(x) for x in elems] if ambient.labels else None
    gens = [idx[x] for x in subset]
    return FiniteSemigroup(table, labels=labels, generators=gens, check=False)


def minimal_generating_set(S):
    """A smallest generating subset (exhaustive over sizes; order <= ~8)."""
    n = S.order
    # Elements that are not products must belong to every generating set.
    products = {S.table[x][y] for x in range(n) for y in range(n)}
    forced = [x for x in range(n) if x not in products]

    def closes(gens):
        seen = set(gens)
        frontier = list(gens)
        while frontier:
            new = []
            for x in frontier:
                for y in seen.copy():
                    for z in (S.table[x][y], S.table[y][x]):
                        if z not in seen:
                            seen.add(z)
                            new.append(z)
            frontier = new
        return len(seen) == n

    rest = [x for x in range(n) if x not in forced]
    if closes(forced):
        return tuple(forced)
    for k in range(1, len(rest) + 1):
        for extra in combinations(rest, k):
            if closes(forced + list(extra)):
                return tuple(forced + list(extra))
    return tuple(range(n))


def divides(S, T, budget=200_000):
    """Whether S divides T: some subsemigroup of T maps onto S.

    For each assignment of T-elements to a generating tuple of S, the
    pair closure {(t_i, g_i)} is grown inside T x S; the assignment
    works iff the closure stays functional in its first coordinate.
    """
    if S.order > T.order:
        return False
    gens = minimal_generating_set(S)
    m = len(gens)
    if T.order ** m > budget:
        raise BudgetExceeded(f"divides search |T|^{m} = {T.order ** m} exceeds budget {budget}")
    for tup in product(range(T.order), repeat=m):
        image = {}
        ok = True
        for t, g in zip(tup, gens):
            if image.get(t, g) != g:
                ok = False
                break
            image[t] = g
        if not ok:
            continue
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


def wreath_product(T, D, budget=200_000):
    """The wreath product T^(D^I) x| D, with D acting by right translation.

    Elements are pairs (f, d) with f a function D^I -> T; the product is
    (f, d)(g, e) = (h, de) with h(x) = f(x) g(xd).  The identity I is
    always adjoined to the action set, matching the size bound
    |T|^(|D|+1) * |D|.
    """
    nd = D.order
    states = nd + 1  # D plus adjoined identity at index nd
    order = (T.order ** states) * nd
    if order > budget:
        raise BudgetExceeded(f"wreath product order {order} exceeds budget {budget}")

    def act(x, d):
        return d if x == nd else D.table[x][d]

    fs = list(product(range(T.order), repeat=states))
    f_index = {f: i for i, f in enumerate(fs)}
    elems = [(f, d) for f in range(len(fs)) for d in range(nd)]
    e_index = {e: i for i, e in enumerate(elems)}
    table = []
    for (fi, d) in elems:
        f = fs[fi]
        row = []
        for (gi, e) in elems:
            g = fs[gi]
            h = tuple(T.table[f[x]][g[act(x, d)]] for x in range(states))
            row.append(e_index[(f_index[h], D.table[d][e])])
        table.append(row)
    return FiniteSemigroup(table, check=False)


def congruences(S, budget=10):
    """All congruences of S: principal congruences closed under join."""
    if S.order > budget:
        raise BudgetExceeded(f"congruence search on order {S.order} exceeds budget {budget}")
    found = {identity_congruence(S).classes}
    queue = []
    for a in range(S.order):
        for b in range(a + 1, S.order):
            c = congruence_from_pairs(S, [(a, b)])
            if c.classes not in found:
                found.add(c.classes)
                queue.append(c)
    # Close under pairwise join; every congruence is a join of principals.
    changed = True
    while changed:
        changed = False
        current = [Congruence(S, cls, check=False) for cls in found]
        for c1 in current:
            for c2 in current:
                pairs = [(min(cls), x) for cls in c1.classes for x in cls]
                pairs += [(min(cls), x) for cls in c2.classes for x in cls]
                j = congruence_from_pairs(S, pairs)
                if j.classes not in found:
                    found.add(j.classes)
                    changed = True
    for cls in sorted(found, key=lambda cs: (len(cs), cs)):
        yield Congruence(S, cls, check=False)


def canonical_table(S, budget_order=8):
    """Lexicographically minimal flattened table over all relabelings."""
    if S._canon is not None:
        return S._canon
    n = S.order
    if n > budget_order:
        raise BudgetExceeded(f"canonical form search on order {n}")
    best = None
    from itertools import permutations
    for perm in permutations(range(n)):
        flat = tuple(perm[S.table[x][y]]
                     for x in _inverse(perm) for y in _inverse(perm))
        if best is None or flat < best:
            best = flat
    S._canon = best
    return best


def _inverse(perm):
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


def is_isomorphic(S, T):
    return S.order == T.order and canonical_table(S) == canonical_table(T)


def is_anti_isomorphic(S, T):
    return S.order == T.order and canonical_table(S) == canonical_table(dual(T))


# ---------------------------------------------------------------------------
# Named catalog


def _b2():
    # Matrix-unit presentation: a=E12, b=E21, ab=E11, ba=E22, 0.
    a, b, ab, ba, z = 0, 1, 2, 3, 4
    t = [[z] * 5 for _ in range(5)]
    t[a][b] = ab
    t[a][ba] = a
    t[b][a] = ba
    t[b][ab] = b
    t[ab][a] = a
    t[ab][ab] = ab
    t[ba][b] = b
    t[ba][ba] = ba
    return FiniteSemigroup(t, labels=["a", "b", "ab", "ba", "0"],
                           generators=[a, b], check=True)


def _u1():
    return FiniteSemigroup([[0, 0], [0, 1]], labels=["0", "1"], check=False)


def _cyclic(n):
    table = [[(x + y) % n for y in range(n)] for x in range(n)]
    return FiniteSemigroup(table, labels=[f"g{x}" for x in range(n)],
                           generators=[1 % n], check=False)


def _left_zero(n):
    return FiniteSemigroup([[x] * n for x in range(n)], check=False)


def _right_zero(n):
    return FiniteSemigroup([list(range(n)) for _ in range(n)], check=False)


def _null(n):
    # All products equal the zero element 0.
    return FiniteSemigroup([[0] * n for _ in range(n)], check=False)


def _free_band_2():
    # Free idempotent semigroup on {a, b}: a, b, ab, ba, aba, bab.
    words = ["a", "b", "ab", "ba", "aba", "bab"]

    def normal(w):
        out = []
        for ch in w:
            if not out or out[-1] != ch:
                out.append(ch)
        w = "".join(out)
        while len(w) > 3:
            w = w[:-2]  # (xy)x(yx)... collapses; length <= 3 suffices on 2 letters
        return w

    idx = {w: i for i, w in enumerate(words)}
    table = [[idx[normal(u + v)] for v in words] for u in words]
    return FiniteSemigroup(table, labels=words, generators=[0, 1], check=True)


def _words_upto(letters, k):
    out = []
    for ln in range(1, k + 1):
        out.extend("".join(w) for w in product(letters, repeat=ln))
    return out


def free_d(k, letters):
    """Free object of D_k on the given letters: words of length <= k
    multiplying by u.v = suffix_k(uv)."""
    words = _words_upto(letters, k)
    idx = {w: i for i, w in enumerate(words)}
    table = [[idx[(u + v)[-k:]] for v in words] for u in words]
    return FiniteSemigroup(table, labels=words,
                           generators=[idx[a] for a in letters], check=False)


def free_k(k, letters):
    """Free object of K_k: words of length <= k with u.v = prefix_k(uv)."""
    words = _words_upto(letters, k)
    idx = {w: i for i, w in enumerate(words)}
    table = [[idx[(u + v)[:k]] for v in words] for u in words]
    return FiniteSemigroup(table, labels=words,
                           generators=[idx[a] for a in letters], check=False)


def free_n(k, letters):
    """Free object of N_k = K_k meet D_k: words of length < k plus a zero
    absorbing every longer product."""
    words = _words_upto(letters, k - 1) if k > 1 else []
    words = words + ["0"]
    zero = len(words) - 1
    idx = {w: i for i, w in enumerate(words)}

    def mul(u, v):
        if u == "0" or v == "0" or len(u) + len(v) >= k:
            return zero
        return idx[u + v]

    table = [[mul(u, v) for v in words] for u in words]
    gens = [idx[a] for a in letters] if k > 1 else [zero]
    return FiniteSemigroup(table, labels=words, generators=gens, check=False)


_CATALOG = {
    "trivial": lambda: _cyclic(1),
    "B2": _b2,
    "B2_1": lambda: adjoin_identity(_b2()),
    "U1": _u1,
    "cyclic": _cyclic,
    "left_zero": _left_zero,
    "right_zero": _right_zero,
    "null": _null,
    "free_band_2": _free_band_2,
    "free_d": free_d,
    "free_k": free_k,
    "free_n": free_n,
}


def catalog(name, *args):
    """Named test semigroups: B2, B2_1, U1, cyclic(n), left_zero(n),
    right_zero(n), null(n), free_band_2, free_d(k, letters),
    free_k(k, letters), free_n(k, letters)."""
    try:
        builder = _CATALOG[name]
    except KeyError:
        raise UnknownName(f"unknown catalog name {name!r}") from None
    if name in ("free_d", "free_k", "free_n"):
        k, letters = args
        if len(letters) > 3 or k > 4:
            raise BudgetExceeded("free objects limited to <= 3 letters, k <= 4")
        return builder(k, letters)
    return builder(*args)
