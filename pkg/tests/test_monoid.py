from itertools import combinations

import numpy as np
import pytest

from catduality.errors import BudgetExceeded, ValidationError
from catduality.monoid import (canonical_table, catalog, congruence_closure, conjugates,
                               constant_hom, cyclic_group, enumerate_monoids, generating_set,
                               horizontal_compose, idempotents, identity_hom, is_conjugate,
                               is_group, kernel_congruence, local_monoid, make_hom, monoid_iso,
                               opposite, point_hom, product_monoid, projection, quotient_monoid,
                               reference_counterexample, relabel, replay_counterexample,
                               semigroup_homs, submonoid, symmetric_group, transformation_monoid,
                               trivial_monoid, validate_monoid, vertical_compose)

from oracles import all_monoid_tables, homs_bruteforce

# hom counts between catalog monoids (rows: source, columns: target),
# frozen from the brute-force oracle over all |N|^|M| maps
HOM_COUNTS = [
    [1, 1, 2, 2, 2, 3, 3, 3, 2, 1],
    [1, 2, 2, 3, 2, 3, 3, 3, 3, 1],
    [1, 1, 3, 3, 3, 6, 5, 5, 3, 1],
    [1, 1, 3, 4, 3, 6, 5, 5, 3, 1],
    [1, 1, 3, 3, 4, 6, 5, 5, 3, 1],
    [1, 1, 4, 4, 4, 10, 7, 7, 4, 1],
    [1, 1, 3, 3, 3, 6, 7, 5, 3, 1],
    [1, 1, 3, 3, 3, 6, 5, 7, 3, 1],
    [1, 2, 3, 4, 3, 6, 5, 5, 5, 1],
    [1, 1, 2, 2, 2, 3, 3, 3, 2, 3],
]


def test_validate_examples(T):
    M = validate_monoid(1, 0, [[0]])
    assert M.order == 1 and M == trivial_monoid()
    assert validate_monoid(2, 0, [[0, 1], [1, 1]]) == T
    with pytest.raises(ValidationError) as err:
        validate_monoid(2, 1, [[0, 1], [1, 0]])
    assert err.value.counterexample["law"] in ("left_unit", "right_unit")


@pytest.mark.parametrize("table, identity, law", [
    ([[0, 1], [1, 0], [0, 0]], 0, "shape"),
    ([[0, 1], [1, 2]], 0, "range"),
    ([[0, 1, 2], [1, 2, 2], [2, 1, 2]], 0, "associativity"),
    ([[0, 1], [0, 1]], 0, "right_unit"),
])
def test_validate_reports_replayable_counterexamples(table, identity, law):
    with pytest.raises(ValidationError) as err:
        validate_monoid(len(table[0]), identity, table)
    cex = err.value.counterexample
    assert cex["law"] == law
    if law != "shape":
        assert replay_counterexample(np.array(table), identity, cex)


def test_associativity_counterexample_is_a_real_triple():
    t = [[0, 1, 2], [1, 2, 2], [2, 1, 2]]
    with pytest.raises(ValidationError) as err:
        validate_monoid(3, 0, t)
    a, b, c = err.value.counterexample["triple"]
    assert t[t[a][b]][c] != t[a][t[b][c]]


def test_idempotents_and_groups(Z2, T, one, S3):
    assert idempotents(Z2) == [0]
    assert idempotents(T) == [0, 1]
    assert idempotents(one) == [0]
    assert is_group(Z2) and not is_group(T) and is_group(S3)
    assert S3.order == 6


def test_monoid_counts_match_oracle():
    for n, expected in [(1, 1), (2, 2), (3, 7), (4, 35)]:
        lib = enumerate_monoids(n)
        assert len(lib) == expected
        assert sorted(tuple(M.table.ravel().tolist()) for M in lib) == all_monoid_tables(n)


def test_enumeration_rejects_large_orders():
    with pytest.raises(BudgetExceeded):
        enumerate_monoids(5)


def test_catalog_order_two_is_z2_and_t(Z2, T):
    c = catalog(2)
    assert [M.order for M in c] == [1, 2, 2]
    assert {monoid_iso(c[1], Z2) is not None, monoid_iso(c[2], T) is not None} == {True}


def test_hom_counts_frozen(cat3):
    got = [[len(semigroup_homs(M, N)) for N in cat3] for M in cat3]
    assert got == HOM_COUNTS


def test_homs_agree_with_bruteforce(cat3):
    for M in cat3:
        for N in cat3:
            lib = [h.map for h in semigroup_homs(M, N)]
            assert lib == homs_bruteforce(M.table.tolist(), N.table.tolist())


def test_hom_examples(Z2, Z3, T, one):
    assert [h.map for h in semigroup_homs(one, T)] == [(0,), (1,)]
    assert [h.map for h in semigroup_homs(Z2, Z3)] == [(0, 0)]
    assert identity_hom(T).map in [h.map for h in semigroup_homs(T, T)]
    assert len(semigroup_homs(T, T)) == 3
    for h in semigroup_homs(T, T):
        e = h.unit_image
        assert T.mul(e, e) == e


def test_unit_need_not_be_preserved(T):
    h = constant_hom(T, T, 1)
    assert not h.preserves_identity()
    h.check()


def test_make_hom_rejects_nonmultiplicative(Z2):
    with pytest.raises(ValidationError) as err:
        make_hom(Z2, Z2, [1, 1])
    assert err.value.counterexample["law"] == "multiplicativity"


def test_conjugate_examples(Z2, T):
    assert [c.witness for c in conjugates(identity_hom(Z2), identity_hom(Z2))] == [0, 1]
    assert [c.witness for c in conjugates(identity_hom(T), identity_hom(T))] == [0, 1]
    S3 = symmetric_group(3)
    for e in idempotents(S3):
        h = constant_hom(S3, S3, e)
        _, local = local_monoid(S3, e)
        assert [c.witness for c in conjugates(h, h)] == local


def test_constant_conjugates_are_the_local_monoid(cat3):
    for M in cat3:
        for e in idempotents(M):
            h = constant_hom(M, M, e)
            _, local = local_monoid(M, e)
            assert [c.witness for c in conjugates(h, h)] == local


def test_unit_only_conjugates_are_weaker(Z2):
    # trivial hom vs identity on Z2: the unit condition alone admits both
    # elements, intertwining admits neither
    f = constant_hom(Z2, Z2, 0)
    g = identity_hom(Z2)
    assert [c.witness for c in conjugates(f, g, unit_only=True)] == [0, 1]
    assert conjugates(f, g) == []


def test_conjugates_need_parallel_homs(Z2, T):
    with pytest.raises(ValueError):
        conjugates(identity_hom(Z2), identity_hom(T))


def test_two_cell_composition(cat3):
    for M in cat3[:6]:
        for N in cat3[:6]:
            homs = semigroup_homs(M, N)
            for f in homs:
                for g in homs:
                    for a in conjugates(f, g):
                        for h in homs:
                            for b in conjugates(g, h):
                                c = vertical_compose(a, b)
                                assert is_conjugate(f, h, c.witness)


def test_horizontal_composition(cat3):
    M, N, P = cat3[2], cat3[5], cat3[3]
    for f in semigroup_homs(M, N):
        for g in semigroup_homs(M, N):
            for a in conjugates(f, g):
                for u in semigroup_homs(N, P):
                    for v in semigroup_homs(N, P):
                        for b in conjugates(u, v):
                            c = horizontal_compose(a, b)
                            assert is_conjugate(c.f, c.g, c.witness)


def test_products_and_quotients():
    S = [symmetric_group(n) for n in (1, 2, 3)]
    P = product_monoid(*S)
    assert P.order == 12 and is_group(P)
    assert projection(P, S, 2).check().is_surjective()
    Z4 = cyclic_group(4)
    Q, q = quotient_monoid(Z4, [(0, 2)])
    assert monoid_iso(Q, cyclic_group(2)) is not None
    assert q.check().is_surjective()
    Q0, _ = quotient_monoid(Z4, [])
    assert monoid_iso(Q0, Z4) is not None


def test_isomorphism_examples(T, Z2):
    Z4 = cyclic_group(4)
    assert monoid_iso(T, T) is not None
    assert monoid_iso(Z2, T) is None
    assert monoid_iso(Z4, product_monoid(Z2, Z2)) is None
    S3 = symmetric_group(3)
    perm = [0, 3, 5, 1, 2, 4]
    R = relabel(S3, perm)
    iso = monoid_iso(S3, R)
    assert iso is not None
    h = make_hom(S3, R, iso)
    assert h.is_surjective()


def test_canonical_table_is_iso_invariant(cat3):
    for M in cat3:
        n = M.order
        rng = np.random.default_rng(n)
        perm = rng.permutation(n)
        assert canonical_table(relabel(M, perm)) == canonical_table(M)


def test_congruences(T):
    Z6 = cyclic_group(6)
    c = congruence_closure(Z6, [(0, 3)])
    assert c.is_compatible()
    assert len(c.classes) == 3
    left = congruence_closure(T, [(0, 1)], kind="left")
    assert left.classes == ((0, 1),)
    h = semigroup_homs(Z6, cyclic_group(3))[1]
    k = kernel_congruence(h)
    assert k.is_compatible() and k.contains(congruence_closure(Z6, []))


def test_generating_sets_are_minimal(cat3):
    for M in cat3 + [symmetric_group(3)]:
        gens = generating_set(M)
        assert len(submonoid(M, gens)) == M.order
        if not gens:
            continue
        for smaller in combinations(range(M.order), len(gens) - 1):
            assert len(submonoid(M, list(smaller))) < M.order


def test_transformation_monoid_of_swap():
    M, elems = transformation_monoid([(1, 0)], 2)
    assert M.order == 2 and is_group(M)
    assert elems[0] == (0, 1)


def test_opposite_and_points(T):
    assert opposite(T) == T   # commutative
    assert point_hom(T, 1).map == (1,)


def test_reference_counterexample(T, Z2):
    assert reference_counterexample(T, T) is None
    cex = reference_counterexample(Z2, T)
    assert cex["law"] == "reference"
    assert replay_counterexample(Z2.table, Z2.identity, cex)
