"""Tests for finite-dimensional irreducible modules."""

from fractions import Fraction

import pytest

from dynreg import linalg
from dynreg.findim import irrep
from dynreg.linalg import FractionOps as F
from dynreg.rootdata import RootSystem


def brk(A, B):
    return linalg.mat_sub(linalg.mat_mul(A, B, F), linalg.mat_mul(B, A, F), F)


def test_dimensions_sl2():
    for n in range(5):
        assert irrep(1, (n,)).dim == n + 1


@pytest.mark.parametrize(
    "hw,dim",
    [((0, 0), 1), ((1, 0), 3), ((0, 1), 3), ((1, 1), 8), ((2, 0), 6), ((2, 1), 15), ((2, 2), 27), ((3, 0), 10)],
)
def test_dimensions_sl3(hw, dim):
    assert irrep(2, hw).dim == dim


def test_weights_fundamental():
    U = irrep(2, (1, 0))
    wts = sorted(U.weights)
    assert wts == sorted([(1, 0), (-1, 1), (0, -1)])
    for wt in wts:
        assert U.weight_space_dim(wt) == 1


def test_adjoint_weight_spaces():
    U = irrep(2, (1, 1))
    assert U.dim == 8
    assert U.weight_space_dim((0, 0)) == 2
    rs = RootSystem(2)
    for alpha in rs.positive_roots():
        c = rs.root_coords(alpha)
        assert U.weight_space_dim(c) == 1
        assert U.weight_space_dim(tuple(-x for x in c)) == 1


def test_commutation_relations_sl2():
    U = irrep(1, (3,))
    e, f, h = U.mats["e"], U.mats["f"], U.mats["h"]
    assert brk(e, f) == h
    assert brk(h, e) == linalg.scalar_mul(Fraction(2), e, F)
    assert brk(h, f) == linalg.scalar_mul(Fraction(-2), f, F)


@pytest.mark.parametrize("hw", [(1, 0), (1, 1), (2, 1)])
def test_commutation_relations_sl3(hw):
    U = irrep(2, hw)
    m = U.mats
    assert brk(m["e1"], m["f1"]) == m["h1"]
    assert brk(m["e2"], m["f2"]) == m["h2"]
    z = [[Fraction(0)] * U.dim for _ in range(U.dim)]
    assert brk(m["e1"], m["f2"]) == z
    assert brk(m["e2"], m["f1"]) == z
    assert brk(m["h1"], m["e2"]) == linalg.scalar_mul(Fraction(-1), m["e2"], F)
    assert brk(m["h2"], m["e1"]) == linalg.scalar_mul(Fraction(-1), m["e1"], F)
    # Serre relations
    ad1 = brk(m["e1"], brk(m["e1"], m["e2"]))
    assert ad1 == z
    ad2 = brk(m["f2"], brk(m["f2"], m["f1"]))
    assert ad2 == z


def test_highest_vector():
    U = irrep(2, (2, 1))
    v = U.basis_vec(U.hw_index())
    assert U.apply("e1", v) == U.zero_vec()
    assert U.apply("e2", v) == U.zero_vec()
    assert U.apply("h1", v) == [2 * x for x in v]


def test_strings_fill_module():
    for hw in [(1, 0), (1, 1), (2, 1)]:
        U = irrep(2, hw)
        for i in (1, 2):
            strings = U.sl2_strings(i)
            assert sum(n + 1 for n, _ in strings) == U.dim
            for n, chain in strings:
                ename = f"e{i}"
                assert U.apply(ename, chain[0]) == U.zero_vec()
                # one step past the bottom vanishes
                assert U.apply(f"f{i}", chain[n]) == U.zero_vec()


def test_flip_involution_and_weighted():
    for rank, hw in [(1, (4,)), (2, (1, 1))]:
        U = irrep(rank, hw)
        for i in range(1, rank + 1):
            s = U.flip_matrix(i)
            assert linalg.mat_mul(s, s, F) == linalg.identity(U.dim, F)
            st = U.flip_matrix(i, weighted=True)
            assert linalg.mat_mul(st, st, F) == linalg.identity(U.dim, F)


def test_flip_word_independence_longest():
    U = irrep(2, (1, 1))
    W = RootSystem(2).weyl_group()
    w0 = W.longest()
    out = None
    for word in W.reduced_words(w0):
        prod = linalg.identity(U.dim, F)
        for i in word:
            prod = linalg.mat_mul(U.flip_matrix(i), prod, F)
        if out is None:
            out = prod
        else:
            assert prod == out


def test_adjoint_flip_fixes_zero_weight():
    U = irrep(2, (1, 1))
    idx = U.weight_space((0, 0))
    for i in (1, 2):
        s = U.flip_matrix(i)
        for r in idx:
            for c in idx:
                assert s[r][c] == (1 if r == c else 0)


def test_cartan_basis_identification():
    U = irrep(2, (1, 1))
    u1, u2 = U.cartan_basis()
    v = U.basis_vec(U.hw_index())
    # u1 is the image of the Cartan element [e1, f1]: ad(e1) u1 = -2 e1,
    # and e1 corresponds to -(f2 v) under v -> [e1, e2]
    e1_vec = [-x for x in U.apply("f2", v)]
    assert U.apply("e1", u1) == [Fraction(-2) * x for x in e1_vec]
    # u2 = [f2, e2]: ad(e2) u2 = 2 e2, with e2 corresponding to f1 v
    e2_vec = U.apply("f1", v)
    assert U.apply("e2", u2) == [Fraction(2) * x for x in e2_vec]
    # both are zero-weight vectors and independent
    assert U.apply("h1", u1) == U.zero_vec()
    assert U.apply("h2", u2) == U.zero_vec()
    idx = U.weight_space((0, 0))
    T = [[u1[r], u2[r]] for r in idx]
    assert linalg.det(T, F) != 0


def test_matrix_on_weight_change_of_basis():
    U = irrep(2, (1, 1))
    # h1 acts by zero on the zero weight space in any basis
    block = U.matrix_on_weight(U.mats["h1"], (0, 0), U.cartan_basis())
    assert block == [[Fraction(0), Fraction(0)], [Fraction(0), Fraction(0)]]
