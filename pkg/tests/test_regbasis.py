"""Tests for the elementary-symmetric realization of the singular part of
the admissible space: the string constraint matrix, its minors and their
divisibility, the distinguished polynomial basis, and the closed product
form of the shifted binomial determinant."""

import itertools
from fractions import Fraction

import pytest
import sympy

from dynreg import glduality, linalg
from dynreg.regbasis import (
    SingularBasisError,
    elementary_symmetric,
    leftmost_minor,
    maximal_minor,
    shifted_binomial_det,
    shifted_binomial_product,
    sigma_basis,
    sigma_basis_coefficients,
    sigma_system,
    singular_multiplicity,
    string_sigma,
)
from dynreg.symcore import ExactDivisionError, MPoly, exact_divide, ring
from dynreg.yangweights import (
    SymPolyH,
    Z_VARS,
    act_e12,
    admissible_basis,
    admissible_check,
    h_vars,
)

Z1, Z2, Z3 = ring("z1", "z2", "z3")


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _t_coeff_rows(elems):
    """Coefficient matrix of symmetric polynomials: one row per element,
    one column per t-monomial, entries polynomial in z."""
    if not elems:
        return [], []
    k = elems[0].k
    cols = sorted({e[:k] for elem in elems for e in elem.poly.terms})
    index = {c: j for j, c in enumerate(cols)}
    rows = []
    for elem in elems:
        row = [dict() for _ in cols]
        for e, c in elem.poly.terms.items():
            row[index[e[:k]]][e[k:]] = c
        rows.append([MPoly(Z_VARS, d) for d in row])
    return cols, rows


def _poly_rank(rows):
    if not rows:
        return 0
    _, pivots = linalg.bareiss_echelon(rows)
    return len(pivots)


def _in_span(rows, vec):
    return _poly_rank(rows + [vec]) == _poly_rank(rows)


def _sympy_system(l, k):
    """The constraint matrix rebuilt independently with sympy."""
    zs = sympy.symbols("z1 z2 z3")
    T = sympy.Symbol("T")
    rows = []
    for i, li in enumerate(l):
        if li >= k:
            continue
        prod = sympy.prod([T + zs[i] - j for j in range(li + 1)])
        # descending powers of T, i.e. sig[r] = sigma_r of the string
        sig = sympy.Poly(prod, T).all_coeffs()
        for s in range(k - li):
            row = []
            for r in range(k + 1):
                m = r - s
                row.append(sig[m] if 0 <= m < len(sig) else sympy.Integer(0))
            rows.append(row)
    return sympy.Matrix(rows), zs


def _mpoly_to_sympy(p, zs):
    out = sympy.Integer(0)
    for e, c in p.terms.items():
        out += sympy.Rational(c) * zs[0] ** e[0] * zs[1] ** e[1] * zs[2] ** e[2]
    return sympy.expand(out)


# ---------------------------------------------------------------------------
# elementary symmetric building blocks
# ---------------------------------------------------------------------------


def test_elementary_symmetric_small():
    e0 = elementary_symmetric(3, 0)
    assert e0.poly == MPoly.const(h_vars(3), 1)
    e2 = elementary_symmetric(3, 2)
    vars = h_vars(3)
    t1 = MPoly.variable(vars, "t1")
    t2 = MPoly.variable(vars, "t2")
    t3 = MPoly.variable(vars, "t3")
    assert e2.poly == t1 * t2 + t1 * t3 + t2 * t3
    with pytest.raises(ValueError):
        elementary_symmetric(3, 4)
    with pytest.raises(ValueError):
        elementary_symmetric(3, -1)


def test_string_sigma_fixtures():
    # three-point string z, z-1, z-2
    assert string_sigma(0, "z2", 2) == MPoly.const(Z_VARS, 1)
    assert string_sigma(1, "z2", 2) == 3 * Z2 - 3
    assert string_sigma(2, "z2", 2) == 3 * Z2 * Z2 - 6 * Z2 + 2
    assert string_sigma(3, "z2", 2) == Z2 * (Z2 - 1) * (Z2 - 2)
    assert string_sigma(4, "z2", 2).is_zero()
    # one-point string
    assert string_sigma(1, "z1", 0) == Z1
    assert string_sigma(2, "z1", 0).is_zero()
    with pytest.raises(ValueError):
        string_sigma(-1, "z1", 0)
    with pytest.raises(ValueError):
        string_sigma(0, "z1", -1)


def test_string_sigma_against_sympy():
    zs = sympy.symbols("z1 z2 z3")
    T = sympy.Symbol("T")
    for length in range(5):
        prod = sympy.prod([T + zs[2] - j for j in range(length + 1)])
        coeffs = sympy.Poly(prod, T).all_coeffs()  # sigma_r in position r
        for r in range(length + 3):
            ours = string_sigma(r, "z3", length)
            theirs = coeffs[r] if r < len(coeffs) else sympy.Integer(0)
            assert sympy.expand(_mpoly_to_sympy(ours, zs) - theirs) == 0, (length, r)


# ---------------------------------------------------------------------------
# the constraint matrix
# ---------------------------------------------------------------------------


def test_sigma_system_shape_and_rows():
    l, k = (1, 2, 4), 3
    rows = sigma_system(l, k)
    assert len(rows) == 3 and all(len(r) == 4 for r in rows)
    one = MPoly.const(Z_VARS, 1)
    zero = MPoly.zero(Z_VARS)
    assert rows[0] == [one, 2 * Z1 - 1, Z1 * (Z1 - 1), zero]
    assert rows[1] == [zero, one, 2 * Z1 - 1, Z1 * (Z1 - 1)]
    assert rows[2] == [
        one,
        3 * Z2 - 3,
        3 * Z2 * Z2 - 6 * Z2 + 2,
        Z2 * (Z2 - 1) * (Z2 - 2),
    ]
    # no constraints when every l_i >= k
    assert sigma_system((2, 2, 2), 2) == []
    with pytest.raises(ValueError):
        sigma_system((1, 1), 2)
    with pytest.raises(ValueError):
        sigma_system((1, 1, -1), 2)


def test_sigma_system_matches_sympy():
    zs = sympy.symbols("z1 z2 z3")
    for l, k in [((1, 2, 4), 3), ((0, 1, 2), 3), ((2, 1, 0), 2), ((1, 1, 1), 3)]:
        ours = sigma_system(l, k)
        theirs, _ = _sympy_system(l, k)
        assert len(ours) == theirs.rows
        for i in range(theirs.rows):
            for j in range(theirs.cols):
                assert sympy.expand(_mpoly_to_sympy(ours[i][j], zs) - theirs[i, j]) == 0


# ---------------------------------------------------------------------------
# minors of the worked three-row example
# ---------------------------------------------------------------------------


def test_worked_example_minors():
    l, k = (1, 2, 4), 3
    m012 = maximal_minor(l, k, (0, 1, 2))
    m013 = maximal_minor(l, k, (0, 1, 3))
    m023 = maximal_minor(l, k, (0, 2, 3))
    m123 = maximal_minor(l, k, (1, 2, 3))
    assert m012 == 3 * (Z1 - Z2) * (Z1 - Z2 + 1)
    assert m013 == (Z1 - Z2) * (Z1 - Z2 + 1) * (2 * Z1 + Z2 - 2)
    assert m023 == (Z1 - Z2) * (Z1 - Z2 + 1) * (Z1 * Z1 + 2 * Z1 * Z2 - 3 * Z1 - Z2 + 2)
    assert m123 == (Z1 - Z2) * (Z1 - Z2 + 1) * (
        3 * Z1 * Z1 * Z2 - 3 * Z1 * Z1 - 3 * Z1 * Z2 + 5 * Z1 + Z2 - 2
    )
    assert leftmost_minor(l, k) == m012
    # independent determinant oracle
    M, zs = _sympy_system(l, k)
    for cols, ours in [((0, 1, 2), m012), ((0, 1, 3), m013), ((0, 2, 3), m023), ((1, 2, 3), m123)]:
        theirs = M[:, list(cols)].det()
        assert sympy.expand(_mpoly_to_sympy(ours, zs) - theirs) == 0
    # the third weight plays no role as long as it exceeds the level
    for cols in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]:
        assert maximal_minor((1, 2, 5), k, cols) == maximal_minor(l, k, cols)


def test_minor_argument_validation():
    with pytest.raises(ValueError):
        maximal_minor((1, 2, 4), 3, (0, 1))
    with pytest.raises(ValueError):
        leftmost_minor((1, 1, 1), 3)  # six constraint rows, four columns


# ---------------------------------------------------------------------------
# the distinguished singular basis
# ---------------------------------------------------------------------------


def test_worked_example_basis():
    for l3 in (4, 5):
        l, k = (1, 2, l3), 3
        basis = sigma_basis(l, k)
        assert len(basis) == 1
        m012 = maximal_minor(l, k, (0, 1, 2))
        m013 = maximal_minor(l, k, (0, 1, 3))
        m023 = maximal_minor(l, k, (0, 2, 3))
        m123 = maximal_minor(l, k, (1, 2, 3))
        combo = (
            elementary_symmetric(k, 3) * m012
            - elementary_symmetric(k, 2) * m013
            + elementary_symmetric(k, 1) * m023
            - elementary_symmetric(k, 0) * m123
        )
        assert basis[0] * m012 == combo
        assert admissible_check(basis[0], l)
        assert act_e12(basis[0]).is_zero()


def test_unconstrained_basis_is_reversed_elementary():
    basis = sigma_basis((2, 2, 2), 2)
    assert basis == [
        elementary_symmetric(2, 2),
        elementary_symmetric(2, 1),
        elementary_symmetric(2, 0),
    ]
    assert sigma_basis((0, 0, 0), 0) == [elementary_symmetric(0, 0)]


def test_single_constraint_basis():
    # one constraint row: sigma_1 - z3 sigma_0 = t1 - z3
    basis = sigma_basis((1, 1, 0), 1)
    assert len(basis) == 1
    vars = h_vars(1)
    assert basis[0].poly == MPoly.variable(vars, "t1") - MPoly.variable(vars, "z3")


def test_basis_trailing_coefficient_structure():
    for l, k in [((1, 2, 4), 3), ((2, 2, 1), 2), ((1, 1, 1), 1), ((2, 1, 0), 1), ((3, 2, 2), 3)]:
        vecs = sigma_basis_coefficients(l, k)
        d = singular_multiplicity(l, k)
        assert len(vecs) == d
        one = MPoly.const(Z_VARS, 1)
        for s, vec in enumerate(vecs, start=1):
            assert len(vec) == k + 1
            assert vec[k - s + 1] == one
            for sp in range(1, d + 1):
                if sp != s:
                    assert vec[k - sp + 1].is_zero()
        # independence: evaluate at a generic rational point and check rank
        if d:
            pt = {"z1": Fraction(9, 7), "z2": Fraction(-3, 5), "z3": Fraction(13, 11)}
            num = [[v.evaluate(pt) for v in vec] for vec in vecs]
            assert linalg.rank(num, linalg.FractionOps) == d


def test_basis_admissible_singular_and_sized():
    cases = [(l, k) for l in itertools.product(range(3), repeat=3) for k in range(4)]
    cases += [((1, 2, 4), 3), ((3, 3, 3), 4), ((2, 3, 4), 4), ((3, 1, 2), 4)]
    for l, k in cases:
        basis = sigma_basis(l, k)
        assert len(basis) == singular_multiplicity(l, k), (l, k)
        for elem in basis:
            assert admissible_check(elem, l), (l, k)
            if k:
                assert act_e12(elem).is_zero(), (l, k)
            for a in range(k):
                assert elem.poly.degree_in(f"t{a + 1}") <= 1, (l, k)


def test_dimension_matches_duality_model():
    for l in itertools.product(range(3), repeat=3):
        for k in range(5):
            assert singular_multiplicity(l, k) == len(glduality.singular_subspace(l, k)), (l, k)
    for l, k in [((3, 1, 2), 4), ((3, 3, 2), 5), ((0, 3, 3), 4), ((3, 3, 3), 5)]:
        assert singular_multiplicity(l, k) == len(glduality.singular_subspace(l, k))


def test_dimension_fixtures():
    # pair of spin-1/2 legs and a trivial leg
    assert [singular_multiplicity((1, 1, 0), k) for k in range(3)] == [1, 1, 0]
    # three spin-1/2 legs
    assert [singular_multiplicity((1, 1, 1), k) for k in range(4)] == [1, 2, 0, 0]
    # middle case: smallest weight + 1 free coefficients
    assert singular_multiplicity((1, 3, 2), 2) == 2
    # top case dimensions drop linearly with the level
    assert [singular_multiplicity((1, 2, 4), k) for k in range(5)] == [1, 2, 2, 1, 0]


def test_minor_divisibility():
    for l in itertools.product(range(3), repeat=3):
        for k in range(4):
            d = singular_multiplicity(l, k)
            rows = sigma_system(l, k)
            nr = len(rows)
            if d < 1 or nr == 0:
                continue
            assert nr == k + 1 - d, (l, k)
            lm = leftmost_minor(l, k)
            assert not lm.is_zero(), (l, k)
            for cols in itertools.combinations(range(k + 1), nr):
                mm = maximal_minor(l, k, cols)
                if not mm.is_zero():
                    exact_divide(mm, lm)  # raises on failure


def test_leftmost_minor_difference_product_factor():
    # when the two smaller weights are both exceeded by the level, the
    # leading block determinant is a constant multiple of a double product
    # of differences z1 - z2 + j1 - j2
    for l, k in [((1, 2, 4), 3), ((1, 1, 2), 2), ((2, 3, 4), 4), ((1, 2, 3), 3)]:
        dp = MPoly.const(Z_VARS, 1)
        for j1 in range(1, k - l[0] + 1):
            for j2 in range(1, k - l[1] + 1):
                dp = dp * (Z1 - Z2 + j1 - j2)
        ratio = exact_divide(leftmost_minor(l, k), dp)
        assert ratio.is_constant() and not ratio.is_zero(), (l, k)


def test_singular_part_spans_e12_kernel_of_admissible_space():
    cases = [((1, 1, 0), 1), ((1, 1, 0), 2), ((2, 1, 0), 2), ((2, 1, 0), 3), ((1, 1, 1), 2), ((2, 2, 0), 2)]
    for l, k in cases:
        adm = admissible_basis(l, k)
        sing = sigma_basis(l, k)
        # every singular element is admissible ...
        _, adm_rows = _t_coeff_rows(adm + sing)
        base = adm_rows[: len(adm)]
        r0 = _poly_rank(base)
        assert r0 == len(adm)
        for row in adm_rows[len(adm) :]:
            assert _in_span(base, row), (l, k)
        # ... and spans the full kernel of the raising action there
        lowered = [act_e12(b) for b in adm]
        _, low_rows = _t_coeff_rows(lowered)
        kern = linalg.poly_kernel(low_rows, Z_VARS) if low_rows else []
        assert len(adm) - _poly_rank(low_rows) == len(sing), (l, k)


# ---------------------------------------------------------------------------
# shifted binomial determinant
# ---------------------------------------------------------------------------


def test_shifted_binomial_identity():
    for a in range(4):
        for b in range(4):
            for c in range(4):
                assert shifted_binomial_det(a, b, c) == shifted_binomial_product(a, b, c), (a, b, c)


def test_shifted_binomial_examples():
    assert shifted_binomial_det(1, 1, 1) == 3
    assert shifted_binomial_det(2, 2, 1) == Fraction(20)
    with pytest.raises(ValueError):
        shifted_binomial_det(-1, 0, 0)
    with pytest.raises(ValueError):
        shifted_binomial_product(0, 0, -2)
