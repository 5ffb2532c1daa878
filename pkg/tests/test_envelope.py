"""Tests for Verma module actions, contravariant forms, singular vectors."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynreg import linalg
from dynreg.envelope import (
    act_e,
    act_e12,
    act_f,
    act_f12,
    act_h,
    apply_lowering,
    apply_transpose,
    key_depth,
    normal_order,
    pbw_keys,
    shapovalov_det,
    shapovalov_det_formula,
    shapovalov_matrix,
    singular_vector,
    singular_vector_exponents,
    unit_key,
    vec_add,
    vec_eq,
    vec_scale,
)
from dynreg.rootdata import RootSystem
from dynreg.symcore import MPoly, ring

LAM2 = tuple(MPoly.variable(("lam1", "lam2"), n) for n in ("lam1", "lam2"))
LAM1 = (MPoly.variable(("lam",), "lam"),)


def test_pbw_keys():
    assert pbw_keys(1, (3,)) == [(3,)]
    assert pbw_keys(2, (1, 1)) == [(1, 0, 1), (0, 1, 0)]
    assert pbw_keys(2, (2, 1)) == [(2, 0, 1), (1, 1, 0)]
    for key in pbw_keys(2, (3, 2)):
        assert key_depth(key) == (3, 2)


def test_f_action_reordering():
    # f2 f1 v = f1 f2 v - f12 v
    v = {unit_key(2): 1}
    lhs = act_f(2, 2, act_f(2, 1, v))
    assert lhs == {(1, 0, 1): 1, (0, 1, 0): -1}
    assert normal_order(2, [(2, 1), (1, 1)]) == lhs
    assert normal_order(2, [(1, 1), (2, 1)]) == {(1, 0, 1): 1}


def test_normal_order_matches_iterated_action():
    word = [(1, 2), (2, 1), (1, 1), (2, 2)]
    elem = normal_order(2, word)
    # applying the normally ordered element reproduces the word action
    v = {(1, 1, 0): Fraction(3)}
    direct = dict(v)
    for i, p in reversed(word):
        for _ in range(p):
            direct = act_f(2, i, direct)
    assert vec_eq(apply_lowering(2, elem, v), direct)


def commutator_ef(rank, i, j, v, lam):
    a = act_e(rank, i, act_f(rank, j, v), lam)
    b = act_f(rank, j, act_e(rank, i, v, lam))
    return vec_add(a, vec_scale(-1, b))


@given(st.integers(0, 3), st.integers(0, 2), st.integers(0, 3))
@settings(max_examples=25, deadline=None)
def test_sl3_commutation_relations(a, b, c):
    v = {(a, b, c): 1}
    for i in (1, 2):
        for j in (1, 2):
            got = commutator_ef(2, i, j, v, LAM2)
            if i == j:
                assert vec_eq(got, act_h(2, i, v, LAM2))
            else:
                assert vec_eq(got, {})


@given(st.integers(0, 5))
@settings(max_examples=10, deadline=None)
def test_sl2_commutation_relation(a):
    v = {(a,): 1}
    got = commutator_ef(1, 1, 1, v, LAM1)
    assert vec_eq(got, act_h(1, 1, v, LAM1))


def test_e12_spot_values():
    # e1 f12 v = f2 v and e2 f12 v = -f1 v
    v = {unit_key(2): 1}
    f12v = act_f12(v)
    assert act_e(2, 1, f12v, LAM2) == {(0, 0, 1): 1}
    assert vec_eq(act_e(2, 2, f12v, LAM2), {(1, 0, 0): -1})
    # e12 kills the cyclic vector; e12 f12 v = -(lam1 + lam2) v because
    # [e1, e2] and [f1, f2] pair to -(h1 + h2)
    assert act_e12(v, LAM2) == {}
    assert vec_eq(act_e12(f12v, LAM2), {unit_key(2): -LAM2[0] - LAM2[1]})


def test_shapovalov_sl2():
    keys, S = shapovalov_matrix(1, (3,))
    assert keys == [(3,)]
    lam = MPoly.variable(("lam",), "lam")
    assert S[0][0] == 6 * lam * (lam - 1) * (lam - 2)


def test_shapovalov_rank2_depth11():
    keys, S = shapovalov_matrix(2, (1, 1))
    assert keys == [(1, 0, 1), (0, 1, 0)]
    l1, l2 = LAM2
    assert S[0][0] == l2 * (l1 + 1)
    assert S[0][1] == l2
    assert S[1][0] == l2
    assert S[1][1] == l1 + l2
    det = shapovalov_det(2, (1, 1))
    assert det == l1 * l2 * (l1 + l2 + 1)


def test_shapovalov_symmetry():
    for depth in [(2, 1), (2, 2), (1, 3)]:
        _, S = shapovalov_matrix(2, depth)
        n = len(S)
        for i in range(n):
            for j in range(n):
                assert S[i][j] == S[j][i]


def test_shapovalov_det_product_formula():
    # the Gram determinant equals the product over (root, level) of linear
    # factors, up to a positive integer constant
    for rank, depth in [(1, (2,)), (1, (4,)), (2, (1, 1)), (2, (2, 1)), (2, (2, 2))]:
        det = shapovalov_det(rank, depth)
        pred = shapovalov_det_formula(rank, depth)
        vars = det.vars
        from dynreg.symcore import RatFun

        ratio = RatFun(det, pred)
        assert ratio.is_constant(), (rank, depth)
        assert ratio.const_value() > 0


def test_singular_vector_exponents_sl2():
    rs = RootSystem(1)
    W = rs.weyl_group()
    s = W.simple(1)
    assert singular_vector_exponents(rs, s, (4,)) == [(1, 5)]
    with pytest.raises(ValueError):
        singular_vector_exponents(rs, s, (Fraction(-3),))


def test_singular_vector_annihilated():
    rs = RootSystem(2)
    W = rs.weyl_group()
    for lam in [(1, 1), (2, 0), (0, 2), (2, 1)]:
        for w in W:
            if w.length == 0:
                continue
            v = singular_vector(rs, w, lam)
            assert v, (w, lam)
            # annihilated by both raising operators at the numeric weight
            lamf = tuple(Fraction(c) for c in lam)
            for i in (1, 2):
                img = act_e(2, i, v, lamf)
                assert vec_eq(img, {}), (w, lam, i)
            # lives at the predicted depth
            depths = {key_depth(k) for k in v}
            assert len(depths) == 1
            nu = depths.pop()
            wl = w.dot(lam)
            # lam - (n1 a1 + n2 a2) = w . lam in weight coordinates
            got = list(lam)
            for jj, n in enumerate(nu):
                step = rs.root_coords(tuple(1 if t == jj else 0 for t in range(2)))
                got = [g - n * s_ for g, s_ in zip(got, step)]
            assert tuple(got) == wl


def test_singular_vector_sl2_power():
    rs = RootSystem(1)
    W = rs.weyl_group()
    v = singular_vector(rs, W.simple(1), (3,))
    assert v == {(4,): 1}
