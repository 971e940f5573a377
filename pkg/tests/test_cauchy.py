import pytest

from catduality.cauchy import (cauchy_completion, classifying_category, enumerate_functors,
                               functor_from_hom, hom_from_functor, nat_trans,
                               restrict_to_classifying, split_idempotent)
from catduality.errors import BudgetExceeded
from catduality.monoid import (constant_hom, conjugates, identity_hom, idempotents,
                               local_monoid, point_hom, semigroup_homs, symmetric_group)


def test_completion_of_t(T):
    C = cauchy_completion(T).check()
    assert C.objects == (0, 1)
    assert C.homs == {(0, 0): (0, 1), (0, 1): (1,), (1, 0): (1,), (1, 1): (1,)}


def test_group_completion_has_one_object():
    S3 = symmetric_group(3)
    C = cauchy_completion(S3)
    assert C.objects == (S3.identity,)
    assert C.hom(S3.identity, S3.identity) == tuple(range(6))


def test_trivial_completion(one):
    C = cauchy_completion(one)
    assert C.arrows() == [(0, 0, 0)]


def test_endomorphisms_are_local_monoids(cat3):
    for M in cat3:
        C = cauchy_completion(M).check()
        for e in C.objects:
            assert e in C.hom(e, e)
            assert list(C.hom(e, e)) == local_monoid(M, e)[1]


def test_idempotents_split(cat3):
    for M in cat3:
        C = cauchy_completion(M)
        for e in C.objects:
            for f in C.hom(e, e):
                if M.mul(f, f) == f:
                    r, s = split_idempotent(C, e, f)
                    assert C.compose(s, r) == f and C.compose(r, s) == f


def test_functor_examples(T):
    F = functor_from_hom(identity_hom(T))
    assert F.obj_map == {0: 0, 1: 1}
    assert all(F(e, d, f) == f for e, d, f in F.source.arrows())
    G = functor_from_hom(constant_hom(T, T, 1))
    assert set(G.obj_map.values()) == {1}
    for e in idempotents(T):
        P = functor_from_hom(point_hom(T, e))
        assert P.obj_map == {0: e}


def test_hom_from_functor_roundtrip(cat3):
    for M in cat3:
        for N in cat3:
            for h in semigroup_homs(M, N):
                assert hom_from_functor(functor_from_hom(h)).map == h.map


def test_functor_counts(Z2, T, one):
    assert len(enumerate_functors(Z2, Z2)) == 2
    assert len(enumerate_functors(T, T)) == 3
    assert [F.obj_map[0] for F in enumerate_functors(one, T)] == idempotents(T)


def test_functors_are_restricted_homs(cat3):
    for M in cat3:
        for N in cat3:
            funcs = {tuple(F.mor_map[(M.identity, M.identity, m)] for m in range(M.order))
                     for F in enumerate_functors(M, N)}
            assert funcs == {h.map for h in semigroup_homs(M, N)}


def test_functor_budget(T):
    with pytest.raises(BudgetExceeded):
        enumerate_functors(symmetric_group(3), symmetric_group(3), budget=100)


def test_nat_trans_examples(Z2):
    F = restrict_to_classifying(functor_from_hom(identity_hom(Z2)))
    assert nat_trans(F, F) == [0, 1]


def test_nat_trans_contains_identity_and_matches_conjugates(cat3):
    for M in cat3:
        for N in cat3:
            homs = semigroup_homs(M, N)
            funcs = [restrict_to_classifying(functor_from_hom(h)) for h in homs]
            for f, F in zip(homs, funcs):
                assert f.unit_image in nat_trans(F, F)
                for g, G in zip(homs, funcs):
                    assert nat_trans(F, G) == [c.witness for c in conjugates(f, g)]


def test_classifying_category(T):
    B = classifying_category(T).check()
    assert B.objects == (0,) and B.hom(0, 0) == (0, 1)
