"""Models of Fin[M] as idempotents, base change, and reconstruction.

A model of Fin[M] is determined by an idempotent e: it sends X to the
fixed-point set eX = {x : e.x = x}.  Morphisms e -> d of models are the
elements f with f e = f = d f, acting on evaluations by x |-> f.x.

Convention: every functor here is described by its action on objects and
maps of M-sets, and natural transformations by components, computed on
explicit finite families.
"""
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .cauchy import cauchy_completion
from .errors import ValidationError
from .monoid import FiniteMonoid, SemigroupHom, idempotents, point_hom
from .mset import (FinMSet, MSetMap, coequalizer, coproduct, equalizer, hom_msets,
                   image_factorization, initial, is_boolean_object, mset_iso,
                   product_mset, pullback, regular, sample_hom_msets, subobjects,
                   terminal, validate_mset)

MAP_SAMPLE = 10000
COHERENCE_MAPS = 24


@dataclass
class Report:
    """Outcome of a family of checks; ``failures`` hold replayable details."""
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def expect(self, cond, **detail):
        self.checks += 1
        if not cond:
            self.failures.append(detail)
        return cond

    def to_dict(self):
        return {"check": self.name, "ok": self.ok, "checks": self.checks,
                "failures": self.failures[:20], "notes": self.notes}


# --- models ----------------------------------------------------------------

@dataclass(frozen=True)
class ModelPoint:
    monoid: FiniteMonoid
    idempotent: int

    def __post_init__(self):
        e = self.idempotent
        if self.monoid.mul(e, e) != e:
            raise ValidationError(f"{e} is not idempotent", {"law": "idempotent", "element": e})


def canonical_model(M):
    return ModelPoint(M, M.identity)


def eval_model(p, X):
    """The fixed points of p.idempotent in X, sorted."""
    e = p.idempotent
    return [x for x in range(X.size) if X.action[e, x] == x]


def eval_map(p, u):
    """Restriction of u : X -> Y to eX -> eY, as a dict."""
    return {x: u(x) for x in eval_model(p, u.source)}


def default_test_family(M, extra=()):
    R = regular(M)
    RR, _, _ = product_mset(R, R)
    return [initial(M), terminal(M), R, RR, *extra]


# --- natural families --------------------------------------------------------

def natural_families(objects, maps, domains=None, codomains=None):
    """Every family (alpha_X) natural with respect to ``maps``.

    ``objects`` is a list of M-sets, ``maps`` a list of (i, j, u) with
    u : objects[i] -> objects[j].  alpha_X sends domains[X] into codomains[X]
    (both default to the whole carrier) and u . alpha_X = alpha_Y . u on
    domains[X].  Solved by domain filtering plus branching; each family is
    returned as a list of dicts.
    """
    n = len(objects)
    domains = domains or [list(range(X.size)) for X in objects]
    codomains = codomains or [list(range(X.size)) for X in objects]
    var = {}
    for i in range(n):
        for x in domains[i]:
            var[(i, x)] = len(var)
    dom = [set(codomains[i]) for (i, x) in var]
    cons = set()
    for i, j, u in maps:
        for x in domains[i]:
            y = u(x)
            if (j, y) not in var:
                raise ValueError(f"map {i}->{j} does not preserve the domains")
            cons.add((var[(i, x)], var[(j, y)], tuple(u.map)))
    cons = list(cons)

    def propagate(d):
        changed = True
        while changed:
            changed = False
            for a, b, u in cons:
                if a == b:
                    na = nb = {v for v in d[a] if u[v] == v}
                else:
                    nb = d[b] & {u[v] for v in d[a]}
                    na = {v for v in d[a] if u[v] in nb}
                if nb != d[b] or na != d[a]:
                    d[b], d[a] = nb, na
                    changed = True
                    if not na or not nb:
                        return False
        return all(d)

    keys = list(var)
    out = []

    def search(d):
        if not propagate(d):
            return
        open_vars = [k for k in range(len(d)) if len(d[k]) > 1]
        if not open_vars:
            vals = [next(iter(s)) for s in d]
            fam = [dict() for _ in range(n)]
            for (i, x), k in var.items():
                fam[i][x] = vals[k]
            out.append(fam)
            return
        k = min(open_vars, key=lambda t: (len(d[t]), t))
        for v in sorted(d[k]):
            nd = [set(s) for s in d]
            nd[k] = {v}
            search(nd)

    if keys:
        search(dom)
    else:
        out.append([dict() for _ in range(n)])
    return out


def _all_maps(objects, limit=None):
    maps = []
    for i, X in enumerate(objects):
        for j, Y in enumerate(objects):
            us = hom_msets(X, Y) if limit is None else hom_msets(X, Y, budget=limit)
            maps.extend((i, j, u) for u in us)
    return maps


# --- the model category ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class ModelCategory:
    """Models e and natural transformations between their evaluations.

    ``homs[(e, d)]`` lists the elements f acting as x |-> f.x from eX to dX;
    ``components[(e, d, f)]`` is the component on the regular M-set.
    """
    monoid: FiniteMonoid
    objects: tuple
    homs: dict = field(repr=False)
    components: dict = field(repr=False)

    def hom(self, e, d):
        return self.homs[(e, d)]

    def compose(self, g, f, e, d, c):
        """Composite of f : e -> d and g : d -> c, read off the components."""
        cf = self.components[(e, d, f)]
        cg = self.components[(d, c, g)]
        comp = {x: cg[cf[x]] for x in cf}
        return comp[e]

    def action(self, f, X):
        return {x: int(X.action[f, x]) for x in range(X.size)}


def model_category(M):
    """Model category of Fin[M], with homs computed as natural transformations.

    The natural transformations eval_e => eval_d are solved for on the
    regular M-set against all its equivariant endomaps; each is then
    identified with the element it sends e to.
    """
    R = regular(M)
    objs = tuple(idempotents(M))
    endo = [(0, 0, u) for u in hom_msets(R, R)]
    homs, comps = {}, {}
    for e in objs:
        for d in objs:
            fams = natural_families([R], endo,
                                    [eval_model(ModelPoint(M, e), R)],
                                    [eval_model(ModelPoint(M, d), R)])
            elems = []
            for fam in fams:
                f = fam[0][e]
                elems.append(f)
                comps[(e, d, f)] = fam[0]
            homs[(e, d)] = tuple(sorted(elems))
    return ModelCategory(M, objs, homs, comps)


def equivalence_witness(Mod, C=None):
    """Check the identity-on-labels functor Mod -> completion is an isomorphism.

    Returns a Report; a passing report means bijective on objects and on every
    hom-set, with identities and composition preserved.
    """
    M = Mod.monoid
    C = C or cauchy_completion(M)
    rep = Report("equivalence")
    rep.expect(set(Mod.objects) == set(C.objects), law="objects",
               model=list(Mod.objects), cauchy=list(C.objects))
    for e in Mod.objects:
        for d in Mod.objects:
            rep.expect(Mod.hom(e, d) == C.hom(e, d), law="hom", pair=[e, d],
                       model=list(Mod.hom(e, d)), cauchy=list(C.hom(e, d)))
        rep.expect(e in Mod.hom(e, e) and Mod.components[(e, e, e)] ==
                   {x: x for x in Mod.components[(e, e, e)]}, law="identity", object=e)
    for e in Mod.objects:
        for d in Mod.objects:
            for c in Mod.objects:
                for f in Mod.hom(e, d):
                    for g in Mod.hom(d, c):
                        rep.expect(Mod.compose(g, f, e, d, c) == C.compose(g, f),
                                   law="composition", arrows=[e, d, c, f, g])
    return rep


# --- base change -----------------------------------------------------------

class BaseChange:
    """The functor Fin[N] -> Fin[M] along h : M -> N.

    X goes to eX with e = h(1), and m acts by x |-> h(m).x.
    """

    def __init__(self, h):
        self.hom = h
        self.source = h.target   # the functor's domain is Fin[N]
        self.target = h.source
        self._cache = {}

    @property
    def idempotent(self):
        return self.hom.unit_image

    def carrier(self, X):
        e = self.idempotent
        return [x for x in range(X.size) if X.action[e, x] == x]

    def on_object(self, X):
        key = id(X)
        hit = self._cache.get(key)
        if hit is not None and hit[0] is X:
            return hit[1]
        elems = self.carrier(X)
        pos = {x: i for i, x in enumerate(elems)}
        rows = X.action[list(self.hom.map)][:, elems] if elems else np.zeros((self.target.order, 0))
        act = np.vectorize(pos.__getitem__, otypes=[np.int64])(rows) if elems else rows
        Y = validate_mset(self.target, len(elems), act)
        self._cache[key] = (X, Y)
        return Y

    def on_map(self, u):
        src = self.carrier(u.source)
        pos = {y: i for i, y in enumerate(self.carrier(u.target))}
        return MSetMap(self.on_object(u.source), self.on_object(u.target),
                       tuple(pos[u(x)] for x in src))

    def __call__(self, obj):
        return self.on_map(obj) if isinstance(obj, MSetMap) else self.on_object(obj)


def base_change(h):
    return BaseChange(h)


def evaluation_functor(p):
    """eval_model(p, .) as base change along the point 1 -> M picking e."""
    return BaseChange(point_hom(p.monoid, p.idempotent))


def conjugate_transformation(c, X):
    """Component at X of the transformation induced by a conjugate c : f => g.

    It runs base_change(f)(X) -> base_change(g)(X), x |-> a.x.
    """
    F, G = BaseChange(c.f), BaseChange(c.g)
    src, tgt = F.carrier(X), G.carrier(X)
    pos = {y: i for i, y in enumerate(tgt)}
    return MSetMap(F.on_object(X), G.on_object(X),
                   tuple(pos[int(X.action[c.witness, x])] for x in src))


def check_conjugate_naturality(c, family, map_limit=COHERENCE_MAPS):
    rep = Report("conjugate_naturality")
    F, G = BaseChange(c.f), BaseChange(c.g)
    comp = {}
    for i, X in enumerate(family):
        try:
            comp[i] = conjugate_transformation(c, X).check()
            rep.expect(True)
        except (KeyError, ValidationError) as exc:
            rep.expect(False, law="component", object=i, error=str(exc))
    for i, X in enumerate(family):
        for j, Y in enumerate(family):
            if i not in comp or j not in comp:
                continue
            maps, _ = sample_hom_msets(X, Y, map_limit)
            for u in maps:
                lhs = comp[j].compose(F.on_map(u)).map
                rhs = G.on_map(u).compose(comp[i]).map
                rep.expect(lhs == rhs, law="naturality", pair=[i, j], map=list(u.map))
    return rep


# --- categoricity ----------------------------------------------------------

def retract_pair(p, X):
    """(r, s) with r : X -> eX, x |-> e.x and s : eX -> X the inclusion."""
    elems = eval_model(p, X)
    pos = {x: i for i, x in enumerate(elems)}
    e = p.idempotent
    r = tuple(pos[int(X.action[e, x])] for x in range(X.size))
    s = tuple(elems)
    return r, s


def check_categoricity(M, test_objects=None, map_limit=MAP_SAMPLE):
    """Every model e is a natural retract of the canonical model on the family.

    Checks r . s = id, naturality of r and s against the maps among the
    test objects (all of them when there are at most ``map_limit`` per
    ordered pair, a seeded sample otherwise), truth transport for monos, and
    that mutually retracting models evaluate isomorphically.
    """
    family = list(test_objects) if test_objects is not None else default_test_family(M)
    rep = Report("categoricity")
    maps = {}
    for i, X in enumerate(family):
        for j, Y in enumerate(family):
            us, complete = sample_hom_msets(X, Y, map_limit)
            maps[(i, j)] = us
            if not complete:
                rep.notes.append(f"maps {i}->{j}: sampled {len(us)}")
    monos = [(i, S_inc) for i, X in enumerate(family)
             for S_inc in (S.as_mset()[1] for S in subobjects(X)) if X.size <= 8]
    monos += [(i, u) for (i, j), us in maps.items() for u in us if u.is_injective()]
    C = cauchy_completion(M)
    for e in idempotents(M):
        p = ModelPoint(M, e)
        pairs = [retract_pair(p, X) for X in family]
        for i, (r, s) in enumerate(pairs):
            rep.expect(all(r[s[k]] == k for k in range(len(s))), law="retraction",
                       idempotent=e, object=i)
            if e == M.identity:
                rep.expect(r == tuple(range(family[i].size)) and s == r,
                           law="canonical_identity", object=i)
        for (i, j), us in maps.items():
            ri, si = pairs[i]
            rj, sj = pairs[j]
            posj = {y: k for k, y in enumerate(sj)}
            for u in us:
                ev = {k: posj.get(u(x)) for k, x in enumerate(si)}
                if not rep.expect(None not in ev.values(), law="eval_typing",
                                  idempotent=e, pair=[i, j], map=list(u.map)):
                    continue
                ok_r = all(rj[u(x)] == ev[ri[x]] for x in range(family[i].size))
                ok_s = all(sj[ev[k]] == u(si[k]) for k in range(len(si)))
                rep.expect(ok_r, law="naturality_r", idempotent=e, pair=[i, j], map=list(u.map))
                rep.expect(ok_s, law="naturality_s", idempotent=e, pair=[i, j], map=list(u.map))
        # a mono inverted by the canonical model is inverted by every model
        for i, u in monos:
            if u.is_surjective():
                src = eval_model(p, u.source)
                tgt = eval_model(p, u.target)
                rep.expect(sorted(u(x) for x in src) == tgt, law="truth_transport",
                           idempotent=e, mono=list(u.map))
    for e, d in combinations(idempotents(M), 2):
        fwd = [(f, g) for f in C.hom(e, d) for g in C.hom(d, e) if M.mul(g, f) == e]
        bwd = [(g, f) for g in C.hom(d, e) for f in C.hom(e, d) if M.mul(f, g) == d]
        if not (fwd and bwd):
            continue
        isos = [(f, g) for f, g in fwd if M.mul(f, g) == d]
        if not rep.expect(bool(isos), law="mutual_retract_iso", pair=[e, d]):
            continue
        f, g = isos[0]
        for i, X in enumerate(family):
            ex = eval_model(ModelPoint(M, e), X)
            dx = eval_model(ModelPoint(M, d), X)
            img = sorted(int(X.action[f, x]) for x in ex)
            rep.expect(img == dx, law="mutual_retract_eval", pair=[e, d], object=i)
    return rep


# --- coherence -------------------------------------------------------------

def _is_iso_map(u):
    return len(u.map) == u.target.size and u.is_iso()


def coherence_check(F, family=None, map_limit=COHERENCE_MAPS):
    """Check that F preserves finite limits, images and finite colimits.

    Every clause compares F applied to a construction with the same
    construction applied to F, through the canonical comparison map, which
    must be bijective.
    """
    N = F.source
    family = list(family) if family is not None else default_test_family(N)[:3]
    rep = Report("coherence")
    rep.expect(F(terminal(N)).size == 1, law="terminal")
    rep.expect(F(initial(N)).size == 0, law="initial")
    maps = {(i, j): sample_hom_msets(X, Y, map_limit)[0]
            for i, X in enumerate(family) for j, Y in enumerate(family)}
    for i, X in enumerate(family):
        for j, Y in enumerate(family):
            P, p1, p2 = product_mset(X, Y)
            Q, q1, q2 = product_mset(F(X), F(Y))
            cmp = MSetMap(F(P), Q, tuple(F(p1)(z) * F(Y).size + F(p2)(z)
                                         for z in range(F(P).size)))
            rep.expect(_is_iso_map(cmp), law="product", pair=[i, j])
            C, i1, i2 = coproduct(X, Y)
            D, _, _ = coproduct(F(X), F(Y))
            back = MSetMap(D, F(C), tuple(F(i1).map) + tuple(F(i2).map))
            rep.expect(_is_iso_map(back), law="coproduct", pair=[i, j])
            us = maps[(i, j)]
            for u in us:
                epi, mono = image_factorization(u)
                fe, fm = image_factorization(F(u))
                pos = {y: k for k, y in enumerate(fm.map)}
                cmp = MSetMap(F(epi.target), fe.target,
                              tuple(pos[F(mono)(z)] for z in range(F(epi.target).size)))
                rep.expect(all(F(mono)(z) in pos for z in range(F(epi.target).size))
                           and _is_iso_map(cmp), law="image", pair=[i, j], map=list(u.map))
            for u, v in combinations(us, 2):
                E, inc = equalizer(u, v)
                E2, inc2 = equalizer(F(u), F(v))
                rep.expect(sorted(F(inc).map) == sorted(inc2.map), law="equalizer",
                           pair=[i, j], maps=[list(u.map), list(v.map)])
                Qc, c = coequalizer(u, v)
                Qc2, c2 = coequalizer(F(u), F(v))
                Fc = F(c)
                # both quotients of F(Y) must induce the same partition
                rep.expect(_same_partition(Fc.map, c2.map) and Fc.is_surjective(),
                           law="coequalizer", pair=[i, j], maps=[list(u.map), list(v.map)])
    for (i, k), us in maps.items():
        for j in range(len(family)):
            for u in us:
                for v in maps[(j, k)]:
                    P, a, b = pullback(u, v)
                    P2, a2, b2 = pullback(F(u), F(v))
                    lhs = sorted(zip(F(a).map, F(b).map))
                    rhs = sorted(zip(a2.map, b2.map))
                    rep.expect(lhs == rhs, law="pullback", objects=[i, j, k],
                               maps=[list(u.map), list(v.map)])
    return rep


def _same_partition(a, b):
    if len(a) != len(b):
        return False
    return len(set(a)) == len(set(zip(a, b))) == len(set(b))


# --- induced morphisms and reconstruction ----------------------------------

def induced_hom_on_models(h):
    """The map M -> N read off base change along h.

    An element m of M is an endomorphism of the canonical model of Fin[M];
    precomposed with base change it acts on the model e = h(1) of Fin[N],
    and conjugating by the retract pair gives an endomorphism of the
    canonical model of Fin[N], evaluated on N_reg at 1.
    """
    M, N = h.source, h.target
    R = regular(N)
    F = BaseChange(h)
    FR = F.on_object(R)
    r, s = retract_pair(ModelPoint(N, F.idempotent), R)
    one = N.identity
    return SemigroupHom(M, N, tuple(s[FR.act(m, r[one])] for m in range(M.order))).check()


def roundtrip_failures(M, N, homs=None):
    from .monoid import semigroup_homs
    homs = semigroup_homs(M, N) if homs is None else homs
    return [list(h.map) for h in homs if induced_hom_on_models(h).map != h.map]


def reconstruct_monoid(M, family=None):
    """The monoid of natural endomorphisms of the forgetful functor on a family.

    Returns (monoid, iso) with iso : monoid -> M sending alpha to the value
    of its regular component at 1.
    """
    R = regular(M)
    family = list(family) if family is not None else [R, terminal(M)]
    try:
        ri = next(i for i, X in enumerate(family) if X == R)
    except StopIteration:
        raise ValueError("family must contain the regular M-set") from None
    fams = natural_families(family, _all_maps(family))
    keys = [tuple(tuple(f[x] for x in range(X.size)) for f, X in zip(fam, family))
            for fam in fams]
    keys.sort()
    idx = {k: i for i, k in enumerate(keys)}
    n = len(keys)
    ident = tuple(tuple(range(X.size)) for X in family)
    table = np.empty((n, n), dtype=np.int64)
    for a, ka in enumerate(keys):
        for b, kb in enumerate(keys):
            comp = tuple(tuple(ca[cb[x]] for x in range(len(cb))) for ca, cb in zip(ka, kb))
            table[a, b] = idx[comp]
    from .monoid import validate_monoid
    E = validate_monoid(n, idx[ident], table)
    iso = SemigroupHom(E, M, tuple(k[ri][M.identity] for k in keys)).check()
    if not (iso.is_surjective() and n == M.order and iso.preserves_identity()):
        raise ValidationError("reconstruction is not isomorphic to the monoid",
                              {"law": "reconstruction", "natural": n, "order": M.order})
    return E, iso


# --- inflation -------------------------------------------------------------

class Inflation:
    """Fin[B] -> Fin[A] along a surjection p : A ->> B; a.x = p(a).x."""

    def __init__(self, p):
        if not p.is_surjective():
            raise ValueError("inflation needs a surjective morphism")
        if not p.preserves_identity():
            raise ValueError("inflation needs p(1) = 1")
        self.hom = p

    def on_object(self, X):
        return FinMSet(self.hom.source, X.action[list(self.hom.map)])

    def on_map(self, u):
        return MSetMap(self.on_object(u.source), self.on_object(u.target), u.map)

    def __call__(self, obj):
        return self.on_map(obj) if isinstance(obj, MSetMap) else self.on_object(obj)


def inflation(p):
    return Inflation(p)


def check_full_faithful(I, family):
    """Hom-sets between inflated objects are exactly the original hom-sets."""
    rep = Report("full_faithful")
    for i, X in enumerate(family):
        for j, Y in enumerate(family):
            before = sorted(u.map for u in hom_msets(X, Y))
            after = sorted(u.map for u in hom_msets(I(X), I(Y)))
            rep.expect(before == after, law="hom_bijection", pair=[i, j],
                       before=len(before), after=len(after))
    return rep


# --- Boolean objects -----------------------------------------------------------

def boolean_report(M, objects):
    """Whether every subobject of every given M-set is complemented."""
    rep = Report("boolean")
    for i, X in enumerate(objects):
        rep.expect(is_boolean_object(X), object=i, size=X.size)
    return rep


def iso_on_family(F, G, family):
    """Whether F(X) and G(X) are isomorphic M-sets for each X."""
    return all(mset_iso(F(X), G(X)) is not None for X in family)
