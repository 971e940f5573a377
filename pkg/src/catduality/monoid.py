"""Finite monoids as multiplication tables.

Also the 2-category structure on them: semigroup morphisms (multiplicative
maps that may move the identity to any idempotent) as 1-cells, and
conjugates as 2-cells.  Everything here is exhaustive and deterministic;
the orders involved are tiny.
"""
from dataclasses import dataclass
from itertools import combinations, permutations, product
from math import comb, prod

import numpy as np

from . import _kernels as K
from . import limits
from .errors import BudgetExceeded, ValidationError

MAX_ENUMERATION_ORDER = 4


def _frozen(table):
    arr = np.array(table, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FiniteMonoid:
    table: np.ndarray
    identity: int
    labels: tuple = None

    @property
    def order(self):
        return int(self.table.shape[0])

    def __len__(self):
        return self.order

    def mul(self, *elems):
        acc = self.identity
        for x in elems:
            acc = int(self.table[acc, x])
        return acc

    def label(self, a):
        return self.labels[a] if self.labels else str(a)

    def elements(self):
        return range(self.order)

    def __eq__(self, other):
        if not isinstance(other, FiniteMonoid):
            return NotImplemented
        return self.identity == other.identity and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.identity, self.table.shape, self.table.tobytes()))

    def __repr__(self):
        return f"FiniteMonoid(order={self.order}, identity={self.identity})"


def validate_monoid(order, identity, table, labels=None):
    """Build a FiniteMonoid, checking shape, range, unit laws and associativity."""
    if not isinstance(order, (int, np.integer)) or order < 1:
        raise ValidationError("order must be a positive integer", {"law": "order"})
    try:
        arr = np.array(table, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"table is not an integer matrix: {exc}", {"law": "shape"})
    if arr.shape != (order, order):
        raise ValidationError(f"table has shape {arr.shape}, expected {(order, order)}",
                              {"law": "shape"})
    bad = np.argwhere((arr < 0) | (arr >= order))
    if len(bad):
        a, b = map(int, bad[0])
        raise ValidationError(f"entry table[{a}][{b}] = {arr[a, b]} out of range",
                              {"law": "range", "pair": [a, b]})
    if not (0 <= identity < order):
        raise ValidationError(f"identity {identity} out of range", {"law": "range"})
    if labels is not None and len(labels) != order:
        raise ValidationError("labels must have one entry per element", {"law": "labels"})
    for a in range(order):
        if arr[identity, a] != a:
            raise ValidationError(f"left unit law fails at {a}: 1*{a} = {arr[identity, a]}",
                                  {"law": "left_unit", "element": a})
        if arr[a, identity] != a:
            raise ValidationError(f"right unit law fails at {a}: {a}*1 = {arr[a, identity]}",
                                  {"law": "right_unit", "element": a})
    v = K.assoc_violation(arr)
    if v[0] >= 0:
        a, b, c = map(int, v)
        raise ValidationError(f"associativity fails at ({a}, {b}, {c})",
                              {"law": "associativity", "triple": [a, b, c]})
    return FiniteMonoid(_frozen(arr), int(identity), tuple(labels) if labels else None)


def replay_counterexample(table, identity, cex):
    """True iff ``cex`` (from ValidationError) really is violated by the table."""
    t = np.asarray(table)
    law = cex.get("law")
    if law == "associativity":
        a, b, c = cex["triple"]
        return t[t[a, b], c] != t[a, t[b, c]]
    if law == "left_unit":
        a = cex["element"]
        return t[identity, a] != a
    if law == "right_unit":
        a = cex["element"]
        return t[a, identity] != a
    if law == "range":
        if "pair" not in cex:
            return not (0 <= identity < len(t))
        a, b = cex["pair"]
        return not (0 <= t[a, b] < len(t))
    if law == "shape":
        return t.ndim != 2 or t.shape[0] != t.shape[1]
    if law == "reference":
        ref = cex["reference"]
        R = FiniteMonoid(_frozen(ref["table"]), ref["identity"])
        a, b = cex["entry"]
        return bool(t[a, b] != R.table[a, b]) and \
            monoid_iso(FiniteMonoid(_frozen(t), identity), R) is None
    return False


def reference_counterexample(M, R):
    """None if M is isomorphic to the reference R, else a replayable witness."""
    if monoid_iso(M, R) is not None:
        return None
    cex = {"law": "reference",
           "reference": {"table": R.table.tolist(), "identity": R.identity}}
    if M.table.shape == R.table.shape:
        a, b = map(int, np.argwhere(M.table != R.table)[0])
        cex["entry"] = [a, b]
        cex["found"] = int(M.table[a, b])
        cex["expected"] = int(R.table[a, b])
    return cex


# --- elementary structure ------------------------------------------------

def idempotents(M):
    t = M.table
    return [int(e) for e in np.flatnonzero(t[np.arange(M.order), np.arange(M.order)] == np.arange(M.order))]


def is_group(M):
    t = M.table
    two_sided = (t == M.identity) & (t.T == M.identity)
    return bool(two_sided.any(axis=1).all())


def submonoid(M, gens):
    seen = {M.identity}
    frontier = [M.identity]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                x = int(M.table[g, m])
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    return sorted(seen)


def generating_set(M):
    """A smallest tuple of non-identity elements generating M as a monoid.

    Exhaustive over small subset sizes, greedy once the number of subsets
    to try exceeds a few thousand.
    """
    cands = [a for a in range(M.order) if a != M.identity]
    if not cands:
        return ()
    for k in range(1, len(cands) + 1):
        if comb(len(cands), k) > 4096:
            break
        for sub in combinations(cands, k):
            if len(submonoid(M, sub)) == M.order:
                return sub
    gens = []
    for a in cands:
        if a not in submonoid(M, gens):
            gens.append(a)
    for g in list(gens):
        rest = [x for x in gens if x != g]
        if len(submonoid(M, rest)) == M.order:
            gens = rest
    return tuple(gens)


def bfs_words(M, gens):
    """Spanning tree of M under left multiplication by generators.

    Returns int arrays (order, parent, via): order[0] is the identity and
    order[j] == gens[via[j]] * order[parent[j]] for j > 0.
    """
    order, parent, via = [M.identity], [-1], [-1]
    index = {M.identity: 0}
    j = 0
    while j < len(order):
        m = order[j]
        for gi, g in enumerate(gens):
            x = int(M.table[g, m])
            if x not in index:
                index[x] = len(order)
                order.append(x)
                parent.append(j)
                via.append(gi)
        j += 1
    if len(order) != M.order:
        raise ValueError("generators do not generate the monoid")
    return (np.array(order, dtype=np.int64), np.array(parent, dtype=np.int64),
            np.array(via, dtype=np.int64))


def monogenic_type(M, a):
    """(index, period) of the cyclic subsemigroup generated by a."""
    seen = {}
    x, k = a, 1
    while x not in seen:
        seen[x] = k
        x = int(M.table[x, a])
        k += 1
    return seen[x], k - seen[x]


def element_profile(M, a):
    t = M.table
    return (monogenic_type(M, a), bool(t[a, a] == a),
            len(set(t[:, a].tolist())), len(set(t[a, :].tolist())))


# --- 1-cells and 2-cells -------------------------------------------------

@dataclass(frozen=True)
class SemigroupHom:
    source: FiniteMonoid
    target: FiniteMonoid
    map: tuple

    def __call__(self, a):
        return self.map[a]

    @property
    def unit_image(self):
        return self.map[self.source.identity]

    def compose(self, inner):
        """self after inner."""
        if inner.target != self.source:
            raise ValueError("homs are not composable")
        return SemigroupHom(inner.source, self.target, tuple(self.map[x] for x in inner.map))

    def preserves_identity(self):
        return self.unit_image == self.target.identity

    def is_surjective(self):
        return len(set(self.map)) == self.target.order

    def check(self):
        if len(self.map) != self.source.order:
            raise ValidationError("map length differs from source order", {"law": "shape"})
        h = np.array([self.map], dtype=np.int64)
        if ((h < 0) | (h >= self.target.order)).any():
            raise ValidationError("map leaves the target", {"law": "range"})
        s, t = self.source.table, self.target.table
        for a in range(self.source.order):
            for b in range(self.source.order):
                if self.map[s[a, b]] != t[self.map[a], self.map[b]]:
                    raise ValidationError(f"h({a}*{b}) != h({a})*h({b})",
                                          {"law": "multiplicativity", "pair": [a, b]})
        e = self.unit_image
        if t[e, e] != e:  # pragma: no cover - implied by multiplicativity
            raise ValidationError("image of the unit is not idempotent", {"law": "unit_image"})
        return self


def make_hom(M, N, mapping):
    return SemigroupHom(M, N, tuple(int(x) for x in mapping)).check()


def identity_hom(M):
    return SemigroupHom(M, M, tuple(range(M.order)))


def constant_hom(M, N, e):
    if N.table[e, e] != e:
        raise ValidationError(f"{e} is not idempotent", {"law": "unit_image"})
    return SemigroupHom(M, N, (int(e),) * M.order)


def point_hom(M, e):
    """The semigroup morphism 1 -> M picking the idempotent e."""
    return constant_hom(trivial_monoid(), M, e)


def semigroup_homs(M, N, budget=None):
    """Every multiplicative map M -> N, sorted lexicographically.

    Candidates are parametrised by the image of the identity (an idempotent)
    and the images of a generating set; the rest is forced.
    """
    gens = generating_set(M)
    order, parent, via = bfs_words(M, gens)
    idem = idempotents(N)
    k = len(gens)
    total = len(idem) * N.order ** k
    budget = limits.budget("semigroup_homs", budget)
    if total > budget:
        raise BudgetExceeded(f"{total} candidate homs exceed budget {budget}")
    if k:
        grid = np.indices((N.order,) * k).reshape(k, -1).T
    else:
        grid = np.zeros((1, 0), dtype=np.int64)
    gen_img = np.asarray(grid, dtype=np.int64)
    blocks = []
    for e in idem:
        c = np.empty((len(gen_img), M.order), dtype=np.int64)
        c[:, order[0]] = e
        for j in range(1, M.order):
            c[:, order[j]] = N.table[gen_img[:, via[j]], c[:, order[parent[j]]]]
        blocks.append(c)
    cands = np.ascontiguousarray(np.concatenate(blocks))
    good = cands[K.hom_mask(M.table, N.table, cands)]
    good = np.unique(good, axis=0) if len(good) else good
    return [SemigroupHom(M, N, tuple(int(x) for x in row)) for row in good]


def factor_through_local(h):
    """h as an identity-preserving morphism into the local monoid h(1) N h(1)."""
    L, elems = local_monoid(h.target, h.unit_image)
    pos = {x: i for i, x in enumerate(elems)}
    return SemigroupHom(h.source, L, tuple(pos[x] for x in h.map))


@dataclass(frozen=True)
class Conjugate:
    f: SemigroupHom
    g: SemigroupHom
    witness: int


def is_conjugate(f, g, a, unit_only=False):
    t = f.target.table
    if not (t[a, f.unit_image] == a == t[g.unit_image, a]):
        return False
    if unit_only:
        return True
    return all(t[a, f(m)] == t[g(m), a] for m in range(f.source.order))


def conjugates(f, g, unit_only=False):
    """Witnesses a with a f(1) = a = g(1) a and a f(m) = g(m) a for every m.

    ``unit_only`` drops the intertwining condition, for comparison with the
    weaker reading of the definition.
    """
    if f.source != g.source or f.target != g.target:
        raise ValueError("conjugates need parallel homs")
    t = f.target.table
    n = f.target.order
    a = np.arange(n)
    ok = (t[a, f.unit_image] == a) & (t[g.unit_image, a] == a)
    if not unit_only:
        fm = np.array(f.map)
        gm = np.array(g.map)
        ok &= (t[a[:, None], fm[None, :]] == t[gm[None, :], a[:, None]]).all(axis=1)
    return [Conjugate(f, g, int(x)) for x in np.flatnonzero(ok)]


def vertical_compose(alpha, beta):
    """beta . alpha : f => h for alpha : f => g and beta : g => h."""
    if alpha.g != beta.f:
        raise ValueError("2-cells are not vertically composable")
    N = alpha.f.target
    return Conjugate(alpha.f, beta.g, N.mul(beta.witness, alpha.witness))


def horizontal_compose(alpha, beta):
    """For alpha : f => g (M -> N) and beta : u => v (N -> P), the 2-cell u f => v g."""
    u = beta.f
    P = u.target
    w = P.mul(beta.witness, u(alpha.witness))
    return Conjugate(u.compose(alpha.f), beta.g.compose(alpha.g), w)


# --- congruences, products, quotients ------------------------------------

@dataclass(frozen=True)
class MonoidCongruence:
    monoid: FiniteMonoid
    classes: tuple
    kind: str = "two-sided"

    def labels(self):
        lab = np.empty(self.monoid.order, dtype=np.int64)
        for i, cls in enumerate(self.classes):
            lab[list(cls)] = i
        return lab

    def related(self, a, b):
        lab = self.labels()
        return lab[a] == lab[b]

    def contains(self, other):
        """True when every class of ``other`` lies inside a class of self."""
        lab = self.labels()
        return all(len({lab[x] for x in cls}) == 1 for cls in other.classes)

    def is_compatible(self):
        lab = self.labels()
        t = self.monoid.table
        same = lab[:, None] == lab[None, :]
        for c in range(self.monoid.order):
            sides = [t[c, :]] + ([t[:, c]] if self.kind == "two-sided" else [])
            for moved in sides:
                lm = lab[moved]
                if (lm[:, None] != lm[None, :])[same].any():
                    return False
        return True


def _classes_from_labels(labels):
    groups = {}
    for x, lab in enumerate(labels.tolist()):
        groups.setdefault(lab, []).append(x)
    return tuple(tuple(groups[k]) for k in sorted(groups))


def congruence_closure(M, pairs, kind="two-sided"):
    """Smallest congruence (left or two-sided) relating every given pair."""
    if kind not in ("two-sided", "left"):
        raise ValueError(f"unknown congruence kind {kind!r}")
    gens = generating_set(M)
    funcs = [M.table[g, :] for g in gens]
    if kind == "two-sided":
        funcs += [M.table[:, g] for g in gens]
    funcs = np.array(funcs, dtype=np.int64).reshape(len(funcs), M.order)
    p = np.array(list(pairs), dtype=np.int64).reshape(-1, 2)
    labels = K.close_equivalence(funcs, p, M.order)
    return MonoidCongruence(M, _classes_from_labels(labels), kind)


def quotient_by(cong):
    if cong.kind != "two-sided":
        raise ValueError("only two-sided congruences give quotient monoids")
    M = cong.monoid
    lab = cong.labels()
    reps = [cls[0] for cls in cong.classes]
    t = lab[M.table[np.ix_(reps, reps)]]
    labels = tuple("[" + M.label(r) + "]" for r in reps)
    Q = FiniteMonoid(_frozen(t), int(lab[M.identity]), labels)
    return Q, SemigroupHom(M, Q, tuple(int(x) for x in lab))


def quotient_monoid(M, pairs):
    return quotient_by(congruence_closure(M, pairs))


def kernel_congruence(h):
    groups = {}
    for x, y in enumerate(h.map):
        groups.setdefault(y, []).append(x)
    classes = tuple(sorted(tuple(v) for v in groups.values()))
    return MonoidCongruence(h.source, classes, "two-sided")


def product_monoid(*monoids):
    """Direct product, elements in row-major order of the factor indices."""
    if not monoids:
        return trivial_monoid()
    orders = [m.order for m in monoids]
    tuples = list(product(*[range(n) for n in orders]))
    index = {tp: i for i, tp in enumerate(tuples)}
    n = len(tuples)
    t = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(tuples):
        for j, y in enumerate(tuples):
            t[i, j] = index[tuple(int(m.table[a, b]) for m, a, b in zip(monoids, x, y))]
    ident = index[tuple(m.identity for m in monoids)]
    labels = tuple("(" + ",".join(m.label(a) for m, a in zip(monoids, tp)) + ")" for tp in tuples)
    return FiniteMonoid(_frozen(t), ident, labels)


def projection(P, monoids, k):
    """The k-th projection out of ``product_monoid(*monoids)``."""
    tuples = list(product(*[range(m.order) for m in monoids]))
    return SemigroupHom(P, monoids[k], tuple(tp[k] for tp in tuples))


def opposite(M):
    return FiniteMonoid(_frozen(M.table.T), M.identity, M.labels)


def local_monoid(M, e):
    """eMe as a monoid with identity e; returns (monoid, sorted elements)."""
    if M.table[e, e] != e:
        raise ValidationError(f"{e} is not idempotent", {"law": "unit_image"})
    elems = sorted({int(M.table[M.table[e, m], e]) for m in range(M.order)})
    pos = {x: i for i, x in enumerate(elems)}
    t = [[pos[int(M.table[a, b])] for b in elems] for a in elems]
    labels = tuple(M.label(x) for x in elems)
    return FiniteMonoid(_frozen(t), pos[e], labels), elems


# --- standard monoids ----------------------------------------------------

def trivial_monoid():
    return FiniteMonoid(_frozen([[0]]), 0, ("1",))


def cyclic_group(n):
    a = np.arange(n)
    labels = tuple(["1"] + [f"g^{k}" if k > 1 else "g" for k in range(1, n)])
    return FiniteMonoid(_frozen((a[:, None] + a[None, :]) % n), 0, labels)


def two_element_semilattice():
    """T = {1, a} with a*a = a."""
    return FiniteMonoid(_frozen([[0, 1], [1, 1]]), 0, ("1", "a"))


def symmetric_group(n):
    perms = list(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    # (s t)(i) = s(t(i))
    t = [[index[tuple(s[x] for x in u)] for u in perms] for s in perms]
    labels = tuple("".join(str(x + 1) for x in p) for p in perms)
    return FiniteMonoid(_frozen(t), index[tuple(range(n))], labels)


def transformation_monoid(generators, degree):
    """Closure of the given maps on range(degree) under composition.

    Product convention: (s t)(q) = t(s(q)), i.e. apply s first.  Returns
    (monoid, elements) with element 0 the identity transformation and the
    remaining elements in BFS order of right multiplication by generators.
    """
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    j = 0
    while j < len(elems):
        s = elems[j]
        for g in generators:
            x = tuple(g[q] for q in s)
            if x not in index:
                index[x] = len(elems)
                elems.append(x)
        j += 1
    t = [[index[tuple(v[q] for q in u)] for v in elems] for u in elems]
    return FiniteMonoid(_frozen(t), 0), elems


# --- isomorphism and enumeration -----------------------------------------

def monoid_iso(M, N, budget=None):
    """An isomorphism M -> N as a tuple, or None.

    Backtracks over images of a generating set restricted to elements with
    the same profile (monogenic type, idempotency, ideal sizes).
    """
    if M.order != N.order:
        return None
    pm = [element_profile(M, a) for a in range(M.order)]
    pn = [element_profile(N, a) for a in range(N.order)]
    if sorted(pm) != sorted(pn):
        return None
    gens = generating_set(M)
    order, parent, via = bfs_words(M, gens)
    options = [[b for b in range(N.order) if pn[b] == pm[g]] for g in gens]
    total = prod(len(o) for o in options)
    budget = limits.budget("monoid_iso", budget)
    if total > budget:
        raise BudgetExceeded(f"{total} isomorphism candidates exceed budget {budget}")
    for choice in product(*options):
        h = np.empty(M.order, dtype=np.int64)
        h[order[0]] = N.identity
        for j in range(1, M.order):
            h[order[j]] = N.table[choice[via[j]], h[order[parent[j]]]]
        if len(set(h.tolist())) != M.order:
            continue
        if K.hom_mask(M.table, N.table, h[None, :])[0]:
            return tuple(int(x) for x in h)
    return None


def relabel(M, perm):
    """The monoid with element a renamed perm[a]."""
    n = M.order
    perm = np.asarray(perm, dtype=np.int64)
    inv = np.empty(n, dtype=np.int64)
    inv[perm] = np.arange(n)
    t = perm[M.table[np.ix_(inv, inv)]]
    labels = tuple(M.labels[i] for i in inv) if M.labels else None
    return FiniteMonoid(_frozen(t), int(perm[M.identity]), labels)


def canonical_table(M):
    """Lexicographically least table over relabellings sending the identity to 0."""
    others = [a for a in range(M.order) if a != M.identity]
    best = None
    for p in permutations(range(1, M.order)):
        perm = np.empty(M.order, dtype=np.int64)
        perm[M.identity] = 0
        perm[others] = p
        inv = np.empty(M.order, dtype=np.int64)
        inv[perm] = np.arange(M.order)
        key = tuple(perm[M.table[np.ix_(inv, inv)]].ravel().tolist())
        if best is None or key < best:
            best = key
    return best


def enumerate_monoids(n):
    """One representative per isomorphism class of monoids of order n (n <= 4).

    Backtracking fill of the non-identity block with associativity checked
    on every fully determined triple; representatives are canonical tables
    with identity 0, sorted.
    """
    if not 1 <= n <= MAX_ENUMERATION_ORDER:
        raise BudgetExceeded(f"monoid enumeration supports orders 1..{MAX_ENUMERATION_ORDER}")
    t = -np.ones((n, n), dtype=np.int64)
    t[0, :] = np.arange(n)
    t[:, 0] = np.arange(n)
    cells = [(a, b) for a in range(1, n) for b in range(1, n)]
    triples = list(product(range(n), repeat=3))
    found = set()

    def consistent():
        for a, b, c in triples:
            ab, bc = t[a, b], t[b, c]
            if ab < 0 or bc < 0:
                continue
            l, r = t[ab, c], t[a, bc]
            if l >= 0 and r >= 0 and l != r:
                return False
        return True

    def fill(i):
        if i == len(cells):
            found.add(canonical_table(FiniteMonoid(t, 0)))
            return
        a, b = cells[i]
        for v in range(n):
            t[a, b] = v
            if consistent():
                fill(i + 1)
        t[a, b] = -1

    fill(0)
    return [FiniteMonoid(_frozen(np.array(key).reshape(n, n)), 0) for key in sorted(found)]


def catalog(max_order=3):
    """Every monoid of order <= max_order up to isomorphism, smallest first."""
    out = []
    for n in range(1, max_order + 1):
        out.extend(enumerate_monoids(n))
    return out
