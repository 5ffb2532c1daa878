"""Tests for the polynomial realization and the duality isomorphism."""

from fractions import Fraction

import pytest

from dynreg.findim import irrep
from dynreg.glduality import (
    DualityModel,
    P_VARS,
    col_op,
    embed_tensor,
    from_tensor_coords,
    model_e,
    model_f,
    model_f12,
    model_h,
    raise_coeff_matrix,
    row_op,
    singular_subspace,
    tensor_coords,
    xvar,
    z_tuples,
)
from dynreg.symcore import MPoly


def _samples():
    # a handful of monomials and a mixed polynomial
    p1 = xvar(1, 1) ** 2 * xvar(2, 3)
    p2 = xvar(1, 2) * xvar(2, 1) * xvar(2, 2)
    p3 = xvar(1, 3) ** 3
    return [p1, p2, p3, p1 + p2 * 2 - p3]


def test_row_and_column_families_commute():
    for p in _samples():
        for a in (1, 2):
            for b in (1, 2):
                for i in (1, 2, 3):
                    for j in (1, 2, 3):
                        lhs = row_op(a, b, col_op(i, j, p))
                        rhs = col_op(i, j, row_op(a, b, p))
                        assert lhs == rhs


def test_gl2_and_gl3_commutation_relations():
    # [E_ab, E_cd] = delta_bc E_ad - delta_da E_cb within each family
    for p in _samples():
        lhs = row_op(1, 2, row_op(2, 1, p)) - row_op(2, 1, row_op(1, 2, p))
        rhs = row_op(1, 1, p) - row_op(2, 2, p)
        assert lhs == rhs
        lhs = col_op(1, 2, col_op(2, 3, p)) - col_op(2, 3, col_op(1, 2, p))
        assert lhs == col_op(1, 3, p)
        lhs = model_e(1, model_f(1, p)) - model_f(1, model_e(1, p))
        assert lhs == model_h(1, p)


def test_z_tuples_enumeration():
    assert z_tuples((2, 1, 0), 1) == [(0, 1, 0), (1, 0, 0)]
    assert z_tuples((1, 1, 1), 1) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert z_tuples((1, 1, 1), 3) == [(1, 1, 1)]
    assert z_tuples((2, 2, 2), 2) == sorted(
        [(2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1)]
    )
    # k = 0 always gives the single zero tuple
    assert z_tuples((3, 0, 2), 0) == [(0, 0, 0)]


def test_embed_tensor_normalization():
    # v_q carries the falling-factorial normalization of q lowering steps
    p = embed_tensor((2, 1, 0), (1, 0, 0))
    assert p == xvar(1, 1) * xvar(2, 1) * xvar(1, 2) * 2
    assert tensor_coords(p, (2, 1, 0)) == {(1, 0, 0): Fraction(1)}


def test_raising_coefficient_formula_matches_model():
    # row_op(1,2) v_q = sum_i q_i (l_i - q_i + 1) v_{q - e_i}, verified
    # against the honest differential-operator computation
    for l in [(2, 1, 0), (1, 1, 1), (2, 2, 1), (3, 1, 2)]:
        for k in range(1, min(sum(l), 4) + 1):
            src = z_tuples(l, k)
            if not src:
                continue
            M = raise_coeff_matrix(l, k)
            dst = z_tuples(l, k - 1)
            for c, q in enumerate(src):
                img = tensor_coords(row_op(1, 2, embed_tensor(l, q)), l)
                expect = {
                    q2: M[r][c] for r, q2 in enumerate(dst) if M[r][c]
                }
                assert img == expect, (l, k, q)


def test_tensor_coords_roundtrip():
    l = (2, 1, 1)
    coords = {(1, 0, 0): Fraction(3, 2), (0, 1, 0): Fraction(-1, 3)}
    assert tensor_coords(from_tensor_coords(l, coords), l) == coords


def test_tensor_coords_rejects_wrong_degree():
    with pytest.raises(ValueError):
        tensor_coords(xvar(1, 1) * xvar(1, 2), (2, 0, 0))


def test_adjoint_highest_singular_vector():
    # frozen oracle: at l = (2,1,0), k = 1 the kernel of the raising
    # operator is spanned by v_{(0,1,0)} - (1/2) v_{(1,0,0)}
    basis = singular_subspace((2, 1, 0), 1)
    assert basis == [{(0, 1, 0): Fraction(1), (1, 0, 0): Fraction(-1, 2)}]


def test_singular_vectors_are_killed():
    for l, k in [((2, 1, 0), 1), ((1, 1, 1), 1), ((2, 2, 1), 2)]:
        for coords in singular_subspace(l, k):
            p = from_tensor_coords(l, coords)
            assert row_op(1, 2, p) == MPoly.zero(P_VARS)


@pytest.mark.parametrize("hw", [(1, 1), (2, 1)])
def test_singular_dimension_matches_weight_multiplicity(hw):
    model = DualityModel(hw)
    U = model.fin
    for mu, idx in U.weight_index.items():
        l = model.l_of(mu)
        assert len(singular_subspace(l, model.k)) == len(idx), (mu, l)


def test_model_highest_vector_is_highest():
    model = DualityModel((1, 1))
    for i in (1, 2):
        assert model_e(i, model.hw_poly) == MPoly.zero(P_VARS)
        assert model_h(i, model.hw_poly) == model.hw_poly * model.hw[i - 1]


@pytest.mark.parametrize("hw", [(1, 0), (1, 1)])
def test_theta_intertwines_generators(hw):
    model = DualityModel(hw)
    U = model.fin
    ops = {
        "f1": lambda p: model_f(1, p),
        "f2": lambda p: model_f(2, p),
        "e1": lambda p: model_e(1, p),
        "e2": lambda p: model_e(2, p),
        "h1": lambda p: model_h(1, p),
        "h2": lambda p: model_h(2, p),
    }
    for name, op in ops.items():
        M = [[Fraction(x) for x in row] for row in U.mats[name]]
        for j in range(U.dim):
            lhs = op(model.polys[j])
            rhs = MPoly.zero(P_VARS)
            for i in range(U.dim):
                if M[i][j]:
                    rhs = rhs + model.polys[i] * M[i][j]
            assert lhs == rhs, (name, j)


def test_theta_blocks_solve_roundtrip():
    model = DualityModel((1, 1))
    U = model.fin
    for mu in U.weight_index:
        for j in U.weight_space(mu):
            u = U.basis_vec(j)
            sing = model.theta_apply(mu, u)
            back = model.theta_solve(mu, sing)
            assert back == [Fraction(x) for x in u]


def test_theta_image_is_singular():
    model = DualityModel((1, 1))
    U = model.fin
    for mu in U.weight_index:
        l = model.l_of(mu)
        for j in U.weight_space(mu):
            p = model.polys[j]
            assert row_op(1, 2, p) == MPoly.zero(P_VARS)
            # and it really sits in column multidegree l
            tensor_coords(p, l)


def test_l_of_mu_roundtrip():
    model = DualityModel((2, 1))
    for mu in model.fin.weight_index:
        l = model.l_of(mu)
        assert sum(l) == model.m
        assert model.mu_of(l) == tuple(Fraction(x) for x in mu)
