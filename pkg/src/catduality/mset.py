"""Finite left M-sets and equivariant maps: the pretopos Fin[M].

Limits are computed on carriers with the componentwise action; colimits
are quotients by the smallest action-stable equivalence relation, which is
closed under a generating set of M only.
"""
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from . import _kernels as K
from . import limits
from .errors import BudgetExceeded, ValidationError
from .monoid import bfs_words, generating_set

SUBSET_CUTOFF = 16
SAMPLE_BATCH = 50


def _frozen(a, shape=None):
    arr = np.array(a, dtype=np.int64)
    if shape is not None:
        arr = arr.reshape(shape)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FinMSet:
    monoid: object
    action: np.ndarray

    @property
    def size(self):
        return int(self.action.shape[1])

    def act(self, m, x):
        return int(self.action[m, x])

    def __eq__(self, other):
        if not isinstance(other, FinMSet):
            return NotImplemented
        return self.monoid == other.monoid and np.array_equal(self.action, other.action)

    def __hash__(self):
        return hash((hash(self.monoid), self.action.shape, self.action.tobytes()))

    def __repr__(self):
        return f"FinMSet(size={self.size}, monoid_order={self.monoid.order})"


def validate_mset(M, size, action):
    try:
        arr = np.array(action, dtype=np.int64).reshape(M.order, size)
    except ValueError:
        raise ValidationError(f"action must be {M.order} x {size}", {"law": "shape"})
    bad = np.argwhere((arr < 0) | (arr >= size))
    if len(bad):
        m, x = map(int, bad[0])
        raise ValidationError(f"action[{m}][{x}] out of range", {"law": "range", "pair": [m, x]})
    v = K.action_violation(M.table, M.identity, arr)
    if v[0] == 0:
        raise ValidationError(f"unit acts nontrivially on {v[3]}",
                              {"law": "unit", "element": int(v[3])})
    if v[0] == 1:
        f, g, x = map(int, v[1:])
        raise ValidationError(f"({f}*{g}).{x} != {f}.({g}.{x})",
                              {"law": "associativity", "f": f, "g": g, "x": x})
    return FinMSet(M, _frozen(arr))


@dataclass(frozen=True)
class MSetMap:
    source: FinMSet
    target: FinMSet
    map: tuple

    def __call__(self, x):
        return self.map[x]

    def compose(self, inner):
        """self after inner."""
        return MSetMap(inner.source, self.target, tuple(self.map[x] for x in inner.map))

    def is_injective(self):
        return len(set(self.map)) == len(self.map)

    def is_surjective(self):
        return set(self.map) == set(range(self.target.size))

    def is_iso(self):
        return self.is_injective() and self.is_surjective()

    def inverse(self):
        inv = [0] * len(self.map)
        for x, y in enumerate(self.map):
            inv[y] = x
        return MSetMap(self.target, self.source, tuple(inv))

    def check(self):
        X, Y = self.source, self.target
        if X.monoid != Y.monoid:
            raise ValidationError("maps must be between M-sets over one monoid", {"law": "monoid"})
        if len(self.map) != X.size or any(not 0 <= y < Y.size for y in self.map):
            raise ValidationError("map has wrong length or leaves the target", {"law": "range"})
        v = K.equivariance_violation(X.action, Y.action, np.array(self.map, dtype=np.int64))
        if v[0] >= 0:
            m, x = map(int, v)
            raise ValidationError(f"f({m}.{x}) != {m}.f({x})",
                                  {"law": "equivariance", "m": m, "x": x})
        return self


def make_map(X, Y, mapping):
    return MSetMap(X, Y, tuple(int(v) for v in mapping)).check()


def identity_map(X):
    return MSetMap(X, X, tuple(range(X.size)))


@dataclass(frozen=True)
class SubMSet:
    parent: FinMSet
    members: frozenset

    def is_closed(self):
        a = self.parent.action
        return all(int(a[m, x]) in self.members for m in range(a.shape[0]) for x in self.members)

    def meet(self, other):
        return SubMSet(self.parent, self.members & other.members)

    def join(self, other):
        return SubMSet(self.parent, self.members | other.members)

    def __le__(self, other):
        return self.members <= other.members

    def sorted_members(self):
        return sorted(self.members)

    def as_mset(self):
        """(S, inclusion) with S carrying the restricted action."""
        elems = self.sorted_members()
        pos = {x: i for i, x in enumerate(elems)}
        a = self.parent.action
        act = [[pos[int(a[m, x])] for x in elems] for m in range(a.shape[0])]
        S = FinMSet(self.parent.monoid, _frozen(act, (a.shape[0], len(elems))))
        return S, MSetMap(S, self.parent, tuple(elems))


# --- basic objects -------------------------------------------------------

def regular(M):
    return FinMSet(M, _frozen(M.table))


def terminal(M):
    return FinMSet(M, _frozen(np.zeros((M.order, 1))))


def initial(M):
    return FinMSet(M, _frozen(np.zeros((M.order, 0))))


def to_terminal(X, one=None):
    one = one or terminal(X.monoid)
    return MSetMap(X, one, (0,) * X.size)


def from_initial(X):
    return MSetMap(initial(X.monoid), X, ())


def _same_monoid(*objs):
    M = objs[0].monoid
    if any(o.monoid != M for o in objs):
        raise ValueError("M-sets over different monoids")
    return M


# --- limits --------------------------------------------------------------

def product_mset(X, Y):
    """(X x Y, p1, p2); pair (x, y) has index x * |Y| + y."""
    M = _same_monoid(X, Y)
    ny = Y.size
    act = X.action[:, :, None] * ny + Y.action[:, None, :]
    P = FinMSet(M, _frozen(act, (M.order, X.size * ny)))
    xs = [i // ny for i in range(P.size)] if ny else []
    ys = [i % ny for i in range(P.size)] if ny else []
    return P, MSetMap(P, X, tuple(xs)), MSetMap(P, Y, tuple(ys))


def pair_map(f, g, P):
    """The map Z -> X x Y induced by f : Z -> X and g : Z -> Y."""
    ny = g.target.size
    return MSetMap(f.source, P, tuple(f(z) * ny + g(z) for z in range(f.source.size)))


def _restrict(X, elems):
    return SubMSet(X, frozenset(elems)).as_mset()


def equalizer(f, g):
    """(E, inclusion) for parallel f, g : X -> Y."""
    X = f.source
    return _restrict(X, [x for x in range(X.size) if f(x) == g(x)])


def factor_through_mono(h, mono):
    """The unique k with mono k = h, assuming the image of h lies in that of mono."""
    pos = {y: i for i, y in enumerate(mono.map)}
    return MSetMap(h.source, mono.source, tuple(pos[h(z)] for z in range(h.source.size)))


def pullback(f, g):
    """(P, p1, p2) for f : X -> Z, g : Y -> Z."""
    X, Y = f.source, g.source
    XY, p1, p2 = product_mset(X, Y)
    P, inc = _restrict(XY, [i for i in range(XY.size) if f(p1(i)) == g(p2(i))])
    return P, p1.compose(inc), p2.compose(inc)


# --- colimits ------------------------------------------------------------

def coproduct(X, Y):
    M = _same_monoid(X, Y)
    act = np.concatenate([X.action, Y.action + X.size], axis=1)
    C = FinMSet(M, _frozen(act, (M.order, X.size + Y.size)))
    return (C, MSetMap(X, C, tuple(range(X.size))),
            MSetMap(Y, C, tuple(range(X.size, X.size + Y.size))))


def copair(f, g, C):
    """The map X + Y -> Z induced by f : X -> Z and g : Y -> Z."""
    return MSetMap(C, f.target, tuple(f.map) + tuple(g.map))


def _generator_rows(X):
    gens = generating_set(X.monoid)
    return np.array([X.action[g] for g in gens], dtype=np.int64).reshape(len(gens), X.size)


def quotient_by_pairs(Y, pairs):
    """Quotient of Y by the smallest action-stable equivalence containing pairs."""
    p = np.array(list(pairs), dtype=np.int64).reshape(-1, 2)
    labels = K.close_equivalence(_generator_rows(Y), p, Y.size)
    k = int(labels.max()) + 1 if Y.size else 0
    reps = np.zeros(k, dtype=np.int64)
    reps[labels[::-1]] = np.arange(Y.size)[::-1]
    act = labels[Y.action[:, reps]] if k else np.zeros((Y.monoid.order, 0))
    Q = FinMSet(Y.monoid, _frozen(act, (Y.monoid.order, k)))
    return Q, MSetMap(Y, Q, tuple(int(x) for x in labels))


def coequalizer(f, g):
    return quotient_by_pairs(f.target, [(f(x), g(x)) for x in range(f.source.size)])


def factor_through_epi(h, q):
    """The unique k with k q = h, for h constant on the fibres of q."""
    out = [None] * q.target.size
    for x, c in enumerate(q.map):
        if out[c] is None:
            out[c] = h(x)
        elif out[c] != h(x):
            raise ValueError("map does not factor through the quotient")
    return MSetMap(q.target, h.target, tuple(out))


def image_factorization(f):
    """(epi, mono) with mono . epi = f; the image is the set-image of f."""
    S, mono = _restrict(f.target, sorted(set(f.map)))
    pos = {y: i for i, y in enumerate(mono.map)}
    epi = MSetMap(f.source, S, tuple(pos[y] for y in f.map))
    return epi, mono


def pushout_of_epi(q, f):
    """Pushout of an epi q : phi ->> psi along f : phi -> chi.

    The kernel pair of q is pushed through f and closed to the smallest
    action-stable equivalence Q on chi; the pushout is chi / Q.  Returns
    (P, from_psi, from_chi).
    """
    if not q.is_surjective():
        raise ValueError("q must be surjective")
    phi = q.source
    fibres = {}
    for x in range(phi.size):
        fibres.setdefault(q(x), []).append(x)
    # the kernel pair is generated, as an equivalence, by consecutive fibre members
    pairs = [(f(a), f(b)) for fib in fibres.values() for a, b in zip(fib, fib[1:])]
    P, to_p = quotient_by_pairs(f.target, pairs)
    from_psi = MSetMap(q.target, P, tuple(to_p(f(fibres[y][0])) for y in range(q.target.size)))
    return P, from_psi, to_p


def generic_pushout(q, f):
    """Pushout as a coequalizer of the two legs into the coproduct."""
    C, i1, i2 = coproduct(q.target, f.target)
    Q, c = coequalizer(i1.compose(q), i2.compose(f))
    return Q, c.compose(i1), c.compose(i2)


# --- orbits, maps, subobjects --------------------------------------------

def orbit(X, x):
    return sorted(set(int(v) for v in X.action[:, x]))


def orbit_generators(X):
    """A set of elements whose orbits cover X, none inside another's orbit."""
    orbits = [frozenset(orbit(X, x)) for x in range(X.size)]
    chosen = []
    covered = set()
    # large orbits first keeps the set small
    for x in sorted(range(X.size), key=lambda v: (-len(orbits[v]), v)):
        if x not in covered:
            chosen.append(x)
            covered |= orbits[x]
    chosen = [g for g in chosen if not any(g in orbits[h] and g != h for h in chosen)]
    return sorted(chosen)


def orbit_decomposition(X):
    """Cyclic sub-M-sets M.x covering X, one per chosen generator x."""
    return [(x, SubMSet(X, frozenset(orbit(X, x)))) for x in orbit_generators(X)]


def _admissible_images(X, Y, g):
    """Points y such that m.g |-> m.y is well defined on the orbit of g."""
    ax, ay = X.action[:, g], Y.action
    same = ax[:, None] == ax[None, :]
    out = []
    for y in range(Y.size):
        col = ay[:, y]
        if not (same & (col[:, None] != col[None, :])).any():
            out.append(y)
    return out


def _map_search(X, Y, gens, require_bijective=False, rng=None):
    """Yield equivariant maps X -> Y fixed by images of orbit generators.

    Depth-first over generator images, pruning as soon as two orbits
    disagree.  Lexicographic order unless ``rng`` shuffles the choices.
    """
    ax, ay = X.action, Y.action
    options = [_admissible_images(X, Y, g) for g in gens]
    u = np.full(X.size, -1, dtype=np.int64)

    def extend(i):
        if i == len(gens):
            if not require_bijective or len(set(u.tolist())) == X.size:
                yield tuple(int(v) for v in u)
            return
        xs = ax[:, gens[i]]
        opts = options[i] if rng is None else rng.permutation(options[i]).tolist()
        for y in opts:
            ys = ay[:, y]
            prev = u[xs]
            if ((prev >= 0) & (prev != ys)).any():
                continue
            saved = prev.copy()
            u[xs] = ys
            yield from extend(i + 1)
            u[xs] = saved

    yield from extend(0)


def iter_hom_msets(X, Y, rng=None):
    """Lazily generate equivariant maps X -> Y (as MSetMap)."""
    _same_monoid(X, Y)
    if X.size == 0:
        yield MSetMap(X, Y, ())
        return
    for u in _map_search(X, Y, orbit_generators(X), rng=rng):
        yield MSetMap(X, Y, u)


def sample_hom_msets(X, Y, limit, seed=0):
    """All maps X -> Y if there are at most ``limit``, else a deterministic sample.

    Returns (maps, complete).  The sample is the lexicographic prefix plus
    a seeded shuffled search, deduplicated.
    """
    maps = []
    for u in iter_hom_msets(X, Y):
        maps.append(u)
        if len(maps) > limit:
            break
    if len(maps) <= limit:
        return maps, True
    half = limit // 2
    chosen = {u.map: u for u in maps[:half]}
    rng = np.random.default_rng(seed)
    # restart the shuffled search every SAMPLE_BATCH hits so draws spread out
    for _ in range(8 * limit // SAMPLE_BATCH + 1):
        if len(chosen) >= limit:
            break
        for _, u in zip(range(SAMPLE_BATCH), iter_hom_msets(X, Y, rng=rng)):
            chosen.setdefault(u.map, u)
            if len(chosen) >= limit:
                break
    return [chosen[k] for k in sorted(chosen)], False


def hom_msets(X, Y, budget=None):
    """Every equivariant map X -> Y, sorted by map."""
    budget = limits.budget("mset_homs", budget)
    out = []
    for u in iter_hom_msets(X, Y):
        out.append(u)
        if len(out) > budget:
            raise BudgetExceeded(f"more than {budget} maps between M-sets of sizes "
                                 f"{X.size} and {Y.size}")
    return out


def _iso_invariant(X):
    return (X.size, sorted(len(orbit(X, x)) for x in range(X.size)),
            sorted(int((X.action[:, x] == x).sum()) for x in range(X.size)))


def mset_iso(X, Y):
    """An isomorphism X -> Y, or None."""
    _same_monoid(X, Y)
    if _iso_invariant(X) != _iso_invariant(Y):
        return None
    if X.size == 0:
        return MSetMap(X, Y, ())
    for u in _map_search(X, Y, orbit_generators(X), require_bijective=True):
        return MSetMap(X, Y, u)
    return None


def subobjects(X):
    """All action-closed subsets of X, sorted by size then members."""
    n = X.size
    gens = generating_set(X.monoid)
    if n <= SUBSET_CUTOFF:
        masks = np.arange(2 ** n, dtype=np.int64)
        bits = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
        closed = np.ones(len(masks), dtype=bool)
        for g in gens:
            moved = bits[:, X.action[g]]          # bit of g.x for each x
            closed &= ~(bits & ~moved).any(axis=1)
        sets = [frozenset(np.flatnonzero(b).tolist()) for b in bits[closed]]
    else:
        principal = {frozenset(orbit(X, x)) for x in range(n)}
        sets = {frozenset()}
        frontier = [frozenset()]
        while frontier:
            nxt = []
            for s in frontier:
                for p in principal:
                    u = s | p
                    if u not in sets:
                        sets.add(u)
                        nxt.append(u)
            frontier = nxt
    return [SubMSet(X, s) for s in sorted(sets, key=lambda s: (len(s), sorted(s)))]


def is_complemented(S):
    rest = SubMSet(S.parent, frozenset(range(S.parent.size)) - S.members)
    return rest.is_closed()


def is_boolean_object(X):
    return all(is_complemented(S) for S in subobjects(X))


def fixed_points(X):
    """Points fixed by the whole action, i.e. maps from the terminal object."""
    return [x for x in range(X.size) if (X.action[:, x] == x).all()]


# --- enumeration ---------------------------------------------------------

def canonical_action(X):
    """Lexicographically least action table over relabellings of the carrier."""
    best = None
    for p in permutations(range(X.size)):
        perm = np.array(p, dtype=np.int64)
        inv = np.empty(X.size, dtype=np.int64)
        inv[perm] = np.arange(X.size)
        key = tuple(perm[X.action[:, inv]].ravel().tolist())
        if best is None or key < best:
            best = key
    return best


def enumerate_msets(M, size, up_to_iso=True, budget=None):
    """Every left M-set on range(size), optionally one per isomorphism class."""
    gens = generating_set(M)
    total = size ** (size * len(gens))
    budget = limits.budget("mset_actions", budget)
    if total > budget:
        raise BudgetExceeded(f"{total} candidate actions exceed budget {budget}")
    order, parent, via = bfs_words(M, gens)
    acts = K.mset_actions(M.table, np.array(gens, dtype=np.int64), order, parent, via, size)
    objs = [FinMSet(M, _frozen(a)) for a in acts]
    if not up_to_iso:
        return objs
    seen = {}
    for X in objs:
        key = canonical_action(X)
        if key not in seen:
            seen[key] = FinMSet(M, _frozen(np.array(key).reshape(M.order, size)))
    return [seen[k] for k in sorted(seen)]


def msets_up_to(M, max_size, up_to_iso=True):
    out = []
    for n in range(max_size + 1):
        out.extend(enumerate_msets(M, n, up_to_iso))
    return out
