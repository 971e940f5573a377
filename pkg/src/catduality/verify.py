"""Per-monoid verification suite and the sabotage harness.

``verify_monoid`` runs every finite check on one monoid and returns a
report whose failures carry JSON counterexamples.  A report that fails
always names a concrete witness that can be replayed through the library.
"""
import time
from dataclasses import dataclass, field

import numpy as np

from .cauchy import functor_from_hom, nat_trans, restrict_to_classifying
from .duality import (Report, boolean_report, check_categoricity, coherence_check,
                      equivalence_witness, evaluation_functor, induced_hom_on_models,
                      model_category, ModelPoint, reconstruct_monoid)
from .errors import ValidationError
from .monoid import (catalog, conjugates, idempotents, is_group, reference_counterexample,
                     replay_counterexample, semigroup_homs, validate_monoid)
from .mset import (generic_pushout, hom_msets, initial, msets_up_to, pushout_of_epi,
                   quotient_by_pairs, regular, terminal)

PUSHOUT_TRIALS = 40
BOOLEAN_MAX_SIZE = 3


@dataclass
class VerifyReport:
    instance: dict
    results: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self):
        return all(r["ok"] for r in self.results)

    def failures(self):
        return [r for r in self.results if not r["ok"]]

    def to_dict(self):
        return {"instance": self.instance, "ok": self.ok,
                "results": self.results, "seconds": round(self.seconds, 3)}


# --- individual checks -------------------------------------------------------

def check_reconstruction(M):
    rep = Report("reconstruction")
    try:
        E, iso = reconstruct_monoid(M, [initial(M), terminal(M), regular(M)])
        rep.expect(E.order == M.order and iso.is_surjective(), order=E.order)
    except ValidationError as exc:
        rep.expect(False, **exc.counterexample)
    return rep


def check_roundtrip(M, partners):
    """induced_hom_on_models recovers every hom, and conjugates are nat. transformations."""
    rep = Report("roundtrip")
    for N in partners:
        for A, B in ((M, N), (N, M)):
            homs = semigroup_homs(A, B)
            for h in homs:
                rep.expect(induced_hom_on_models(h).map == h.map, law="roundtrip",
                           source=A.table.tolist(), target=B.table.tolist(), map=list(h.map))
            funcs = {h.map: restrict_to_classifying(functor_from_hom(h)) for h in homs}
            for f in homs:
                for g in homs:
                    conj = [c.witness for c in conjugates(f, g)]
                    nat = nat_trans(funcs[f.map], funcs[g.map])
                    rep.expect(conj == nat, law="conjugates", f=list(f.map), g=list(g.map),
                               conjugates=conj, nat_trans=nat)
    return rep


def check_boolean_group(M, max_size=BOOLEAN_MAX_SIZE):
    """All small M-sets are Boolean exactly when M is a group."""
    objs = msets_up_to(M, max_size) + [regular(M)]
    b = boolean_report(M, objs)
    rep = Report("boolean_group")
    rep.expect(b.ok == is_group(M), law="boolean_iff_group", group=is_group(M),
               non_boolean=b.failures[:3])
    return rep


def pushout_trials(M, trials=PUSHOUT_TRIALS, max_size=3, seed=0):
    """Compare the pushout-of-epi recipe with coproduct-then-coequalizer.

    Each trial draws phi, chi among small M-sets, an epi q out of phi (a
    quotient by random pairs) and a map f : phi -> chi.  The two pushouts
    must agree through the unique comparison compatible with both legs.
    """
    rng = np.random.default_rng(seed)
    objs = [X for X in msets_up_to(M, max_size) if X.size]
    rep = Report("pushout")
    done = attempts = 0
    while done < trials and attempts < 50 * trials:
        attempts += 1
        phi = objs[rng.integers(len(objs))]
        chi = objs[rng.integers(len(objs))]
        maps = hom_msets(phi, chi)
        if not maps:
            continue
        f = maps[rng.integers(len(maps))]
        k = int(rng.integers(0, phi.size + 1))
        pairs = rng.integers(0, phi.size, size=(k, 2)).tolist()
        _, q = quotient_by_pairs(phi, pairs)
        rep.expect(_same_pushout(q, f), law="pushout", phi=phi.action.tolist(),
                   chi=chi.action.tolist(), q=list(q.map), f=list(f.map))
        done += 1
    rep.notes.append(f"{done} trials")
    return rep


def _same_pushout(q, f):
    P, a1, b1 = pushout_of_epi(q, f)
    Q, a2, b2 = generic_pushout(q, f)
    # both legs from chi are surjective, so the comparison is forced
    cmp = {}
    for c in range(f.target.size):
        if cmp.setdefault(b1(c), b2(c)) != b2(c):
            return False
    if sorted(cmp) != list(range(P.size)) or sorted(cmp.values()) != list(range(Q.size)):
        return False
    equivariant = all(cmp[P.act(m, x)] == Q.act(m, cmp[x])
                      for m in range(P.monoid.order) for x in range(P.size))
    legs = all(cmp[a1(y)] == a2(y) for y in range(q.target.size))
    return equivariant and legs


def check_coherence(M):
    rep = Report("coherence")
    for e in idempotents(M):
        r = coherence_check(evaluation_functor(ModelPoint(M, e)))
        rep.checks += r.checks
        rep.failures += [dict(x, idempotent=e) for x in r.failures]
    return rep


def check_reference(M, reference):
    rep = Report("reference")
    cex = reference_counterexample(M, reference)
    rep.expect(cex is None, **(cex or {}))
    return rep


# --- the suite ---------------------------------------------------------------

def verify_monoid(M, partners=None, reference=None, name=None, pushouts=PUSHOUT_TRIALS):
    """Run the full suite on M; BudgetExceeded propagates to the caller."""
    t0 = time.perf_counter()
    partners = catalog(3) if partners is None else partners
    report = VerifyReport({"name": name, "order": M.order, "table": M.table.tolist(),
                           "identity": M.identity})
    steps = [
        lambda: equivalence_witness(model_category(M)),
        lambda: check_categoricity(M),
        lambda: check_reconstruction(M),
        lambda: check_roundtrip(M, partners),
        lambda: check_boolean_group(M),
        lambda: pushout_trials(M, pushouts),
        lambda: check_coherence(M),
    ]
    if reference is not None:
        steps.insert(0, lambda: check_reference(M, reference))
    try:
        for step in steps:
            report.results.append(step().to_dict())
    finally:
        report.seconds = time.perf_counter() - t0
    return report


# --- sabotage ----------------------------------------------------------------

def mutations(M):
    """Every single-entry change (a, b, v) of the table."""
    return [(a, b, v) for a in range(M.order) for b in range(M.order)
            for v in range(M.order) if v != M.table[a, b]]


def sabotage(M, a, b, v, partners=()):
    """Mutate table[a][b] to v and report how the damage is caught.

    Returns {"caught_by": ..., "counterexample": ..., "replays": bool}.  A
    mutated table that is still a monoid is verified against the original as
    reference, which fails unless the two are isomorphic.
    """
    t = M.table.copy()
    t[a, b] = v
    try:
        N = validate_monoid(M.order, M.identity, t)
    except ValidationError as exc:
        cex = exc.counterexample
        return {"caught_by": "validate_monoid", "counterexample": cex,
                "replays": bool(replay_counterexample(t, M.identity, cex))}
    rep = verify_monoid(N, partners=list(partners), reference=M, pushouts=5)
    bad = rep.failures()
    if not bad:
        return {"caught_by": None, "counterexample": None, "replays": False}
    cex = bad[0]["failures"][0]
    replays = cex.get("law") == "reference" and bool(replay_counterexample(t, M.identity, cex))
    return {"caught_by": "verify:" + bad[0]["check"], "counterexample": cex, "replays": replays}
