"""The eight acceptance criteria, one test each.

Every test records a single PASS/FAIL line; the lines are repeated in the
terminal summary of the pytest run.
"""
import re

import numpy as np

from catduality.cauchy import enumerate_functors, functor_from_hom, nat_trans, \
    restrict_to_classifying
from catduality.duality import boolean_report, induced_hom_on_models, model_category
from catduality.lang import compile_min_dfa, parse_regex, syntactic_monoid, to_python_regex, \
    words
from catduality.monoid import (catalog, conjugates, cyclic_group, enumerate_monoids, is_group,
                               monoid_iso, product_monoid, replay_counterexample,
                               semigroup_homs, symmetric_group, two_element_semilattice)
from catduality.mset import hom_msets, msets_up_to, pushout_of_epi, quotient_by_pairs, regular
from catduality.profinite import continuous_homs_to_finite, cyclic_monoid, pro_cyclic, \
    truncated_limit
from catduality.verify import mutations, pushout_trials, sabotage, verify_monoid

from oracles import all_monoid_tables, homs_bruteforce, nerode_index, pushout_classes


def test_criterion_1_duality_finite_shadow(criterion):
    counts = [len(all_monoid_tables(n)) for n in (1, 2, 3)]
    lib = [len(enumerate_monoids(n)) for n in (1, 2, 3)]
    failed = []
    for i, M in enumerate(catalog(3)):
        rep = verify_monoid(M, name=f"catalog:{i}")
        checks = {r["check"]: r["ok"] for r in rep.results}
        needed = ("equivalence", "categoricity", "reconstruction", "boolean_group")
        if not rep.ok or not all(checks.get(c) for c in needed):
            failed.append((i, [r["check"] for r in rep.failures()]))
    ok = counts == lib == [1, 2, 7] and not failed
    assert criterion(1, "catalog of orders 1-3 verifies", ok,
                     f"classes {lib}, oracle {counts}, failures {failed}")


def test_criterion_2_roundtrip(criterion):
    cat = catalog(3)
    homs = bad = pairs = 0
    for M in cat:
        for N in cat:
            hs = semigroup_homs(M, N)
            funcs = [restrict_to_classifying(functor_from_hom(h)) for h in hs]
            for h, F in zip(hs, funcs):
                homs += 1
                bad += induced_hom_on_models(h).map != h.map
                for g, G in zip(hs, funcs):
                    pairs += 1
                    bad += [c.witness for c in conjugates(h, g)] != nat_trans(F, G)
    assert criterion(2, "roundtrip and conjugates = natural transformations", bad == 0,
                     f"{homs} homs, {pairs} parallel pairs, {bad} mismatches")


def test_criterion_3_functor_counts(criterion):
    cat = catalog(3)
    bad = []
    total = 0
    for i, M in enumerate(cat):
        for j, N in enumerate(cat):
            n_f = len(enumerate_functors(M, N))
            n_h = len(semigroup_homs(M, N))
            n_o = len(homs_bruteforce(M.table.tolist(), N.table.tolist()))
            total += n_f
            if not n_f == n_h == n_o:
                bad.append((i, j, n_f, n_h, n_o))
    assert criterion(3, "functors BM -> completion of N = semigroup homs", not bad,
                     f"{len(cat) ** 2} pairs, {total} functors, mismatches {bad}")


def _oracle_trials(M, trials, seed):
    """Recipe against the naive fixpoint pushout, on draws like pushout_trials."""
    rng = np.random.default_rng(seed)
    objs = [X for X in msets_up_to(M, 4) if X.size]
    done = bad = 0
    while done < trials:
        phi, chi = objs[rng.integers(len(objs))], objs[rng.integers(len(objs))]
        maps = hom_msets(phi, chi)
        if not maps:
            continue
        f = maps[rng.integers(len(maps))]
        k = int(rng.integers(0, phi.size + 1))
        _, q = quotient_by_pairs(phi, rng.integers(0, phi.size, size=(k, 2)).tolist())
        P, a, b = pushout_of_epi(q, f)
        legs = list(a.map) + list(b.map)
        got = {frozenset(i for i, v in enumerate(legs) if v == c) for c in range(P.size)}
        bad += got != pushout_classes(q.map, f.map, q.target.action.tolist(),
                                      chi.action.tolist())
        done += 1
    return done, bad


def test_criterion_4_pushout_recipe(criterion):
    monoids = {"Z2": cyclic_group(2), "T": two_element_semilattice(),
               "Z3": cyclic_group(3), "C(1,2)": cyclic_monoid(1, 2)}
    summary = []
    ok = True
    for name, M in monoids.items():
        rep = pushout_trials(M, 100, max_size=4, seed=1)
        done, bad = _oracle_trials(M, 100, seed=2)
        ok &= rep.ok and rep.notes == ["100 trials"] and bad == 0
        summary.append(f"{name}: {rep.checks}+{done} ok={rep.ok and not bad}")
    assert criterion(4, "pushout-of-epi recipe = coproduct/coequalizer", ok, "; ".join(summary))


def test_criterion_5_product_of_symmetric_groups(criterion):
    P = product_monoid(*[symmetric_group(n) for n in (1, 2, 3)])
    objs = msets_up_to(P, 4) + [regular(P)]
    Mod = model_category(P)
    b = boolean_report(P, objs)
    ok = P.order == 12 and is_group(P) and len(Mod.objects) == 1 and b.ok
    assert criterion(5, "S1 x S2 x S3", ok,
                     f"order {P.order}, group {is_group(P)}, {len(Mod.objects)} model object, "
                     f"{len(objs)} test objects Boolean={b.ok}")


def test_criterion_6_profinite_stabilization(criterion):
    S = pro_cyclic(2, 2)
    z2 = continuous_homs_to_finite(S, cyclic_group(2))
    z3 = continuous_homs_to_finite(S, cyclic_group(3))
    isos = [monoid_iso(truncated_limit(S, k), S.levels[k]) is not None for k in range(3)]
    ok = (len(z2.homs) == 2 and z2.stable_from == 1 and len(z3.homs) == 1
          and z3.stable_from == 1 and all(isos))
    assert criterion(6, "Z/2 <- Z/4 <- Z/8 stabilizes", ok,
                     f"Z2 counts {z2.counts} stable from {z2.stable_from}, "
                     f"Z3 counts {z3.counts}, truncations iso {isos}")


def test_criterion_7_regex_pipeline(criterion):
    even = syntactic_monoid("(aa)*")
    last_a = syntactic_monoid("(a|b)*a")
    shape = (even.monoid.order == 2 and is_group(even.monoid)
             and last_a.monoid.order == 3 and not is_group(last_a.monoid))
    disagreements = 0
    checked = 0
    for text, S in (("(aa)*", even), ("(a|b)*a", last_a)):
        for w in words(S.dfa.alphabet, 8):
            checked += 1
            disagreements += S.accepts(w) != S.dfa.accepts(w)
        member = re.compile(to_python_regex(parse_regex(text))).fullmatch
        alphabet = list(S.dfa.alphabet)
        disagreements += nerode_index(lambda w: member(w) is not None, alphabet, 5, 5) != \
            compile_min_dfa(text).size
    ok = shape and disagreements == 0
    assert criterion(7, "regex to syntactic monoid", ok,
                     f"orders {even.monoid.order}/{last_a.monoid.order}, {checked} words, "
                     f"{disagreements} disagreements")


def test_criterion_8_sabotage(criterion):
    silent = []
    caught = {}
    total = 0
    for i, M in enumerate(catalog(3)):
        if M.order < 2:
            continue
        for a, b, v in mutations(M):
            total += 1
            out = sabotage(M, a, b, v)
            if not out["caught_by"] or not out["replays"]:
                silent.append((i, a, b, v))
                continue
            t = M.table.copy()
            t[a, b] = v
            assert replay_counterexample(t, M.identity, out["counterexample"])
            key = out["caught_by"]
            caught[key] = caught.get(key, 0) + 1
    assert criterion(8, "every single-entry mutation is caught", not silent,
                     f"{total} mutations, caught by {caught}, silent {silent}")
