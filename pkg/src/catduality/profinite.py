"""Profinite monoids presented as chains of finite monoids.

A system is a list of levels M_0 <- M_1 <- ... with surjective,
identity-preserving transitions.  Level 0 is the coarsest quotient.
Continuity questions become questions of factoring through some level.
"""
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import ValidationError
from .monoid import (FiniteMonoid, SemigroupHom, cyclic_group, idempotents, identity_hom,
                     product_monoid, projection, semigroup_homs, symmetric_group,
                     trivial_monoid, validate_monoid)
from .mset import FinMSet


@dataclass(frozen=True, eq=False)
class InverseSystem:
    levels: tuple
    transitions: tuple      # transitions[k - 1] : levels[k] -> levels[k - 1]
    name: str = None

    def __post_init__(self):
        if not self.levels:
            raise ValueError("an inverse system needs at least one level")
        if len(self.transitions) != len(self.levels) - 1:
            raise ValueError("need one transition per level above 0")

    @property
    def depth(self):
        return len(self.levels) - 1

    def check(self):
        for k, t in enumerate(self.transitions, start=1):
            if t.source != self.levels[k] or t.target != self.levels[k - 1]:
                raise ValidationError(f"transition {k} has the wrong endpoints",
                                      {"law": "typing", "level": k})
            t.check()
            if not t.is_surjective():
                raise ValidationError(f"transition {k} is not surjective",
                                      {"law": "surjective", "level": k})
            if not t.preserves_identity():
                raise ValidationError(f"transition {k} moves the identity",
                                      {"law": "identity", "level": k})
        return self

    def projection(self, k, j):
        """The composite levels[k] -> levels[j] for j <= k."""
        if not 0 <= j <= k <= self.depth:
            raise ValueError(f"no projection from level {k} to level {j}")
        p = identity_hom(self.levels[k])
        for i in range(k, j, -1):
            p = self.transitions[i - 1].compose(p)
        return p

    def truncate(self, k):
        return InverseSystem(self.levels[:k + 1], self.transitions[:k], self.name)


@dataclass(frozen=True)
class ProElement:
    system: InverseSystem
    thread: tuple

    def check(self):
        for k in range(1, len(self.thread)):
            if self.system.transitions[k - 1](self.thread[k]) != self.thread[k - 1]:
                raise ValidationError(f"thread breaks at level {k}",
                                      {"law": "compatibility", "level": k})
        return self

    def __mul__(self, other):
        d = min(len(self.thread), len(other.thread))
        return ProElement(self.system, tuple(self.system.levels[k].mul(self.thread[k], other.thread[k])
                                             for k in range(d)))


def make_system(levels, transitions, name=None):
    return InverseSystem(tuple(levels), tuple(transitions), name).check()


def threads(S, k):
    """All compatible tuples (x_0, ..., x_k), built level by level."""
    if not 0 <= k <= S.depth:
        raise ValueError(f"depth {k} out of range 0..{S.depth}")
    out = [(x,) for x in range(S.levels[0].order)]
    for j in range(1, k + 1):
        t = S.transitions[j - 1]
        out = [tp + (x,) for tp in out for x in range(S.levels[j].order) if t(x) == tp[-1]]
    return sorted(out)


def truncated_limit(S, k):
    """The monoid of compatible k-tuples under the componentwise product."""
    ts = threads(S, k)
    index = {tp: i for i, tp in enumerate(ts)}
    n = len(ts)
    table = np.empty((n, n), dtype=np.int64)
    for a, x in enumerate(ts):
        for b, y in enumerate(ts):
            table[a, b] = index[tuple(S.levels[j].mul(x[j], y[j]) for j in range(k + 1))]
    ident = index[tuple(L.identity for L in S.levels[:k + 1])]
    M = validate_monoid(n, ident, table)
    labels = tuple(S.levels[k].label(tp[-1]) for tp in ts)
    return FiniteMonoid(M.table, M.identity, labels)


# --- continuous homs ---------------------------------------------------------

@dataclass
class HomTower:
    """Homs out of each level, with the ones new at each level recorded."""
    per_level: list                 # per_level[k] = semigroup_homs(levels[k], N)
    new: list                       # (k, hom) for homs not factoring through k - 1
    lifts_bijective: list = field(default_factory=list)

    @property
    def counts(self):
        return [len(h) for h in self.per_level]

    @property
    def homs(self):
        return self.new

    @property
    def stable_from(self):
        """Least k >= 1 after which the count no longer grows, or None."""
        d = len(self.per_level) - 1
        if d < 1:
            return None
        k = d
        while k >= 1 and self.lifts_bijective[k - 1]:
            k -= 1
        return k + 1 if k + 1 <= d else None

    def to_dict(self):
        return {"counts": self.counts, "stable_from": self.stable_from,
                "homs": [{"level": k, "map": list(h.map)} for k, h in self.new]}


def continuous_homs_to_finite(S, N, max_depth=None):
    d = S.depth if max_depth is None else min(max_depth, S.depth)
    per_level = [semigroup_homs(S.levels[k], N) for k in range(d + 1)]
    new = [(0, h) for h in per_level[0]]
    bij = []
    for k in range(1, d + 1):
        t = S.transitions[k - 1]
        lifted = {h.compose(t).map for h in per_level[k - 1]}
        here = {h.map for h in per_level[k]}
        if not lifted <= here:
            raise ValidationError("a lifted hom is missing at the next level",
                                  {"law": "monotone", "level": k})
        bij.append(lifted == here and len(lifted) == len(per_level[k - 1]))
        new.extend((k, h) for h in per_level[k] if h.map not in lifted)
    return HomTower(per_level, new, bij)


@dataclass
class ContinuousHoms:
    source_depth: int
    towers: list            # towers[j] : HomTower into target level j
    families: list          # compatible tuples of homs levels[d] -> T_j, j = 0..depth

    @property
    def counts(self):
        return [t.counts[-1] for t in self.towers]

    @property
    def stable(self):
        return all(t.stable_from is not None for t in self.towers)

    def to_dict(self):
        return {"source_depth": self.source_depth, "counts": self.counts,
                "stable": self.stable, "families": len(self.families)}


def continuous_homs(S, T, max_depth=None):
    """Compatible families of continuous homs S -> T_j along T's transitions.

    Everything is represented at a common source level d; a family is a
    tuple (phi_0, ..., phi_depth) with t_j . phi_j = phi_{j-1}.
    """
    d = S.depth if max_depth is None else min(max_depth, S.depth)
    e = T.depth if max_depth is None else min(max_depth, T.depth)
    towers = [continuous_homs_to_finite(S, T.levels[j], d) for j in range(e + 1)]
    fams = [(h,) for h in towers[0].per_level[-1]]
    for j in range(1, e + 1):
        t = T.transitions[j - 1]
        fams = [f + (h,) for f in fams for h in towers[j].per_level[-1]
                if t.compose(h).map == f[-1].map]
    return ContinuousHoms(d, towers, fams)


# --- continuity of actions -----------------------------------------------------

def _factors_through(X, p):
    """The action of the quotient through p, if the action is constant on fibres."""
    a = X.action
    target = p.target
    rows = [None] * target.order
    for m in range(p.source.order):
        c = p(m)
        if rows[c] is None:
            rows[c] = a[m]
        elif not np.array_equal(rows[c], a[m]):
            return None
    return FinMSet(target, np.array(rows, dtype=np.int64).reshape(target.order, X.size))


@dataclass
class ContinuityCertificate:
    level: int
    action: FinMSet

    def to_dict(self):
        return {"level": self.level, "action": self.action.action.tolist()}


def is_continuous_action(S, k, X):
    """Minimal level through which an action of levels[k] factors.

    Returns (True, certificate); an action of a finite level always factors
    through that level, so the content is the minimal level.
    """
    if X.monoid != S.levels[k]:
        raise ValueError("action must be over the given level")
    for j in range(k + 1):
        Y = _factors_through(X, S.projection(k, j))
        if Y is not None:
            return True, ContinuityCertificate(j, Y)
    raise AssertionError("unreachable: the identity projection always factors")


def orbit_congruence(X, x):
    """Left congruence m ~ n iff m.x = n.x, as a label per element."""
    col = X.action[:, x]
    _, labels = np.unique(col, return_inverse=True)
    return labels.astype(np.int64)


def action_kernel(X):
    """Two-sided congruence m ~ n iff m and n act identically."""
    _, labels = np.unique(X.action, axis=0, return_inverse=True)
    return np.asarray(labels, dtype=np.int64).ravel()


def is_open_congruence(S, k, labels):
    """Least level j whose projection kernel lies in the congruence on levels[k]."""
    labels = np.asarray(labels)
    for j in range(k + 1):
        p = np.array(S.projection(k, j).map)
        # every fibre of p must sit inside one class
        if all(len(set(labels[p == c].tolist())) <= 1 for c in np.unique(p)):
            return j
    return k  # pragma: no cover


# --- fixtures --------------------------------------------------------------

def cyclic_monoid(threshold, period):
    """{1, x, ..., x^(t+p-1)} with x^(t+p) = x^t."""
    t, p = int(threshold), int(period)
    if t < 0 or p < 1:
        raise ValueError("need threshold >= 0 and period >= 1")
    n = t + p

    def red(s):
        return s if s < n else t + (s - t) % p

    a = np.arange(n)
    table = np.vectorize(red)(a[:, None] + a[None, :]).astype(np.int64)
    labels = tuple(["1", "x"] + [f"x^{k}" for k in range(2, n)])[:n]
    M = validate_monoid(n, 0, table)
    return FiniteMonoid(M.table, 0, labels)


def _reduction(big, small, f):
    return SemigroupHom(big, small, tuple(f(x) for x in range(big.order))).check()


def pro_cyclic(p, depth):
    """Z/p <- Z/p^2 <- ... <- Z/p^(depth+1)."""
    levels = [cyclic_group(p ** (k + 1)) for k in range(depth + 1)]
    trans = [_reduction(levels[k], levels[k - 1], lambda x, m=p ** k: x % m)
             for k in range(1, depth + 1)]
    return make_system(levels, trans, f"pro{p}")


def threshold_chain(depth):
    """cyclic_monoid(1,1) <- cyclic_monoid(2,1) <- ...: x^i maps to x^min(i, k)."""
    levels = [cyclic_monoid(k + 1, 1) for k in range(depth + 1)]
    trans = [_reduction(levels[k], levels[k - 1], lambda x, c=k: min(x, c))
             for k in range(1, depth + 1)]
    return make_system(levels, trans, "threshold")


def symmetric_chain(depth):
    """S1 <- S1 x S2 <- S1 x S2 x S3 <- ..., forgetting the last factor."""
    if depth > 3:
        raise ValueError("symmetric chain is limited to depth 3")
    groups = [symmetric_group(n) for n in range(1, depth + 2)]
    levels = [product_monoid(*groups[:k + 1]) for k in range(depth + 1)]
    trans = []
    for k in range(1, depth + 1):
        pr = [projection(levels[k], groups[:k + 1], i) for i in range(k)]
        index = {tp: i for i, tp in enumerate(product(*[range(g.order) for g in groups[:k]]))}
        trans.append(_reduction(levels[k], levels[k - 1],
                                lambda x, pr=pr, index=index: index[tuple(q(x) for q in pr)]))
    return make_system(levels, trans, "symmetric")


def trivial_system(depth=0):
    levels = [trivial_monoid()] * (depth + 1)
    trans = [identity_hom(levels[0])] * depth
    return make_system(levels, trans, "trivial")


def constant_system(N, depth):
    levels = [N] * (depth + 1)
    return make_system(levels, [identity_hom(N)] * depth, "constant")


STANDARD = {"pro2": lambda d: pro_cyclic(2, d), "pro3": lambda d: pro_cyclic(3, d),
            "threshold": threshold_chain, "symmetric": symmetric_chain,
            "trivial": trivial_system}


def standard_systems(name, depth):
    try:
        return STANDARD[name](depth)
    except KeyError:
        raise ValueError(f"unknown system {name!r}; choose from {sorted(STANDARD)}") from None


def idempotent_threads(T, depth=None):
    """Compatible tuples of idempotents, i.e. homs from the trivial system."""
    d = T.depth if depth is None else depth
    out = [(e,) for e in idempotents(T.levels[0])]
    for j in range(1, d + 1):
        t = T.transitions[j - 1]
        out = [f + (e,) for f in out for e in idempotents(T.levels[j]) if t(e) == f[-1]]
    return out
