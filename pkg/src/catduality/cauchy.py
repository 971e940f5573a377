"""Idempotent completion of a one-object category.

For a monoid M the completion has one object per idempotent e and arrows
e -> d the elements f with f e = f = d f, composed by multiplication in M.
Functors between completions correspond to semigroup morphisms, and
natural transformations to conjugates.
"""
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from . import limits
from .errors import BudgetExceeded, ValidationError
from .monoid import SemigroupHom, idempotents

@dataclass(frozen=True, eq=False)
class CauchyCategory:
    base: object
    objects: tuple
    homs: dict = field(repr=False)

    def hom(self, e, d):
        return self.homs[(e, d)]

    def identity(self, e):
        return e

    def compose(self, g, f):
        """g after f."""
        return self.base.mul(g, f)

    def arrows(self):
        return [(e, d, f) for e in self.objects for d in self.objects for f in self.homs[(e, d)]]

    def hom_sizes(self):
        return {k: len(v) for k, v in self.homs.items()}

    def check(self):
        M = self.base
        for e in self.objects:
            if e not in self.homs[(e, e)]:
                raise ValidationError(f"identity {e} missing from hom({e},{e})",
                                      {"law": "identity", "object": e})
        for e in self.objects:
            for d in self.objects:
                for c in self.objects:
                    for f in self.homs[(e, d)]:
                        for g in self.homs[(d, c)]:
                            if M.mul(g, f) not in self.homs[(e, c)]:
                                raise ValidationError(
                                    "composition leaves the hom-set",
                                    {"law": "composition", "arrows": [e, d, c, f, g]})
        return self


def _hom_set(M, e, d):
    t = M.table
    f = np.arange(M.order)
    return tuple(int(x) for x in np.flatnonzero((t[f, e] == f) & (t[d, f] == f)))


def cauchy_completion(M):
    objs = tuple(idempotents(M))
    return CauchyCategory(M, objs, {(e, d): _hom_set(M, e, d) for e in objs for d in objs})


def classifying_category(M):
    """BM as the full subcategory of the completion on the identity object."""
    i = M.identity
    return CauchyCategory(M, (i,), {(i, i): tuple(range(M.order))})


def split_idempotent(C, e, f):
    """Split an idempotent f : e -> e through the object f.

    Returns (r, s) with r : e -> f, s : f -> e, s r = f and r s = id_f.
    """
    M = C.base
    if f not in C.hom(e, e) or M.mul(f, f) != f:
        raise ValueError(f"{f} is not an idempotent endomorphism of {e}")
    r, s = f, f
    assert r in C.hom(e, f) and s in C.hom(f, e)
    assert C.compose(s, r) == f and C.compose(r, s) == C.identity(f)
    return r, s


@dataclass(frozen=True, eq=False)
class CompletionFunctor:
    source: CauchyCategory
    target: CauchyCategory
    obj_map: dict
    mor_map: dict = field(repr=False)

    def __call__(self, e, d, f):
        return self.mor_map[(e, d, f)]

    def key(self):
        return (tuple(sorted(self.obj_map.items())), tuple(sorted(self.mor_map.items())))

    def __eq__(self, other):
        return isinstance(other, CompletionFunctor) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def violations(self):
        S, T = self.source, self.target
        out = []
        for e, d, f in S.arrows():
            img = self.mor_map[(e, d, f)]
            if img not in T.hom(self.obj_map[e], self.obj_map[d]):
                out.append({"law": "typing", "arrow": [e, d, f]})
        for e in S.objects:
            if self.mor_map[(e, e, e)] != self.obj_map[e]:
                out.append({"law": "identity", "object": e})
        for e in S.objects:
            for d in S.objects:
                for c in S.objects:
                    for f in S.hom(e, d):
                        for g in S.hom(d, c):
                            lhs = self.mor_map[(e, c, S.compose(g, f))]
                            rhs = T.compose(self.mor_map[(d, c, g)], self.mor_map[(e, d, f)])
                            if lhs != rhs:
                                out.append({"law": "composition", "arrows": [e, d, c, f, g]})
        return out

    def check(self):
        bad = self.violations()
        if bad:
            raise ValidationError("functor laws fail", bad[0])
        return self


def functor_from_hom(h):
    S = cauchy_completion(h.source)
    T = cauchy_completion(h.target)
    obj = {e: h(e) for e in S.objects}
    mor = {(e, d, f): h(f) for e, d, f in S.arrows()}
    return CompletionFunctor(S, T, obj, mor).check()


def restrict_to_classifying(F):
    i = F.source.base.identity
    S = classifying_category(F.source.base)
    mor = {(i, i, m): F.mor_map[(i, i, m)] for m in range(S.base.order)}
    return CompletionFunctor(S, F.target, {i: F.obj_map[i]}, mor)


def hom_from_functor(F):
    M = F.source.base
    i = M.identity
    if i not in F.source.objects:
        raise ValueError("functor source must contain the identity object")
    h = SemigroupHom(M, F.target.base, tuple(F.mor_map[(i, i, m)] for m in range(M.order)))
    return h.check()


def enumerate_functors(M, N, budget=None):
    """All functors BM -> completion of N, by brute force.

    For each object e of the target, every map M -> hom(e, e) is tried and
    the functor laws are checked directly.
    """
    idem = idempotents(N)
    budget = limits.budget("functors", budget)
    candidates = N.order ** (M.order + len(idem))
    if candidates > budget:
        raise BudgetExceeded(f"{candidates} functor candidates exceed budget {budget}")
    S = classifying_category(M)
    T = cauchy_completion(N)
    i = M.identity
    rows = []
    for e in idem:
        cands = np.array(T.hom(e, e), dtype=np.int64)
        rows.extend(tuple(int(x) for x in r)
                    for r in K.functor_maps(M.table, i, N.table, e, cands))
    out = []
    for r in sorted(rows):
        mor = {(i, i, m): r[m] for m in range(M.order)}
        out.append(CompletionFunctor(S, T, {i: r[i]}, mor))
    return out


def nat_trans(F, G):
    """Components at the identity object of natural transformations F => G."""
    if F.source.base != G.source.base or F.target.base != G.target.base:
        raise ValueError("functors must be parallel")
    M = F.source.base
    T = F.target
    i = M.identity
    fe, ge = F.obj_map[i], G.obj_map[i]
    out = []
    for a in T.hom(fe, ge):
        if all(T.compose(G(i, i, m), a) == T.compose(a, F(i, i, m)) for m in range(M.order)):
            out.append(a)
    return out
