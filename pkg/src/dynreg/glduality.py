"""Polynomial realization of the rank-two modules via a commuting pair.

Two families of first-order operators act on polynomials in the six
variables x_ai (a = 1,2; i = 1,2,3):

    row_op(a, b)  =  sum_i  x_ai d/dx_bi      (a copy of gl_2),
    col_op(i, j)  =  sum_a  x_ai d/dx_aj      (a copy of gl_3),

and the two families commute.  The polynomials of column multidegree
l = (l1, l2, l3) realize the tensor product V_{l1} (x) V_{l2} (x) V_{l3}
of irreducible gl_2 modules, with the weight basis vector v_q (q_i
lowering steps applied in the i-th factor) embedded as

    v_q  =  prod_i (l_i! / (l_i - q_i)!) x_1i^(l_i - q_i) x_2i^(q_i).

On these coordinates the gl_2 raising operator acts by

    row_op(1, 2) v_q  =  sum_i q_i (l_i - q_i + 1) v_{q - e_i}.

Vectors killed by row_op(1, 2) of row degree (m - k, k), m = sum(l),
form the l-weight space of the gl_3 module with highest weight
(m - k, k, 0); the column operators restrict to the rank-two simple Lie
algebra action on them (f1 = col_op(2,1), f2 = col_op(3,2), e1 =
col_op(1,2), e2 = col_op(2,3)).  `DualityModel` carries the resulting
exact isomorphism between a `FinDimModule` with highest weight
(Lam1, Lam2) = (m - 2k, k) and these singular subspaces, one multidegree
l per weight mu of the module.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, List, Sequence, Tuple

from . import linalg
from .dynweyl import depth_between
from .linalg import FractionOps
from .symcore import MPoly
from .findim import FinDimModule, irrep
from .rootdata import RootSystem

P_VARS = ("x11", "x12", "x13", "x21", "x22", "x23")

_FOPS = FractionOps()


def xvar(a: int, i: int) -> MPoly:
    """The generator x_ai (row a in 1..2, column i in 1..3)."""
    return MPoly.variable(P_VARS, f"x{a}{i}")


def _shift_op(pairs, p: MPoly) -> MPoly:
    out = MPoly.zero(P_VARS)
    for up, down in pairs:
        out = out + up * p.diff(down)
    return out


def row_op(a: int, b: int, p: MPoly) -> MPoly:
    """The gl_2 matrix unit E_ab acting on the polynomial model."""
    return _shift_op([(xvar(a, i), f"x{b}{i}") for i in (1, 2, 3)], p)


def col_op(i: int, j: int, p: MPoly) -> MPoly:
    """The gl_3 matrix unit E_ij acting on the polynomial model."""
    return _shift_op([(xvar(a, i), f"x{a}{j}") for a in (1, 2)], p)


def model_f(i: int, p: MPoly) -> MPoly:
    return col_op(i + 1, i, p)


def model_e(i: int, p: MPoly) -> MPoly:
    return col_op(i, i + 1, p)


def model_f12(p: MPoly) -> MPoly:
    return model_f(1, model_f(2, p)) - model_f(2, model_f(1, p))


def model_h(i: int, p: MPoly) -> MPoly:
    return col_op(i, i, p) - col_op(i + 1, i + 1, p)


def z_tuples(l: Sequence[int], k: int) -> List[Tuple[int, ...]]:
    """All q with 0 <= q_i <= l_i and sum q_i = k, in ascending
    lexicographic order; the canonical index set for the weight basis of
    the embedded tensor product."""
    out = []
    for q1 in range(min(k, l[0]) + 1):
        for q2 in range(min(k - q1, l[1]) + 1):
            q3 = k - q1 - q2
            if 0 <= q3 <= l[2]:
                out.append((q1, q2, q3))
    out.sort()
    return out


def _norm(l: Sequence[int], q: Sequence[int]) -> int:
    n = 1
    for li, qi in zip(l, q):
        n *= factorial(li) // factorial(li - qi)
    return n


def embed_tensor(l: Sequence[int], q: Sequence[int]) -> MPoly:
    """The basis vector v_q of V_{l1} (x) V_{l2} (x) V_{l3} as a
    polynomial (q_i lowering steps in the i-th factor)."""
    exp = [0] * 6
    for i in range(3):
        if not 0 <= q[i] <= l[i]:
            raise ValueError(f"q={tuple(q)} not within l={tuple(l)}")
        exp[i] = l[i] - q[i]
        exp[3 + i] = q[i]
    return MPoly(P_VARS, {tuple(exp): Fraction(_norm(l, q))})


def tensor_coords(p: MPoly, l: Sequence[int]) -> Dict[Tuple[int, ...], Fraction]:
    """Coordinates of a multidegree-l polynomial in the v_q basis."""
    out: Dict[Tuple[int, ...], Fraction] = {}
    for exp, coeff in p.terms.items():
        q = tuple(exp[3 + i] for i in range(3))
        for i in range(3):
            if exp[i] + exp[3 + i] != l[i]:
                raise ValueError(
                    f"monomial {exp} does not have column degrees {tuple(l)}"
                )
        out[q] = coeff / _norm(l, q)
    return {q: c for q, c in out.items() if c}


def from_tensor_coords(l: Sequence[int], coords: Dict[Tuple[int, ...], Fraction]) -> MPoly:
    out = MPoly.zero(P_VARS)
    for q, c in coords.items():
        out = out + embed_tensor(l, q) * c
    return out


def raise_coeff_matrix(l: Sequence[int], k: int) -> List[List[Fraction]]:
    """Matrix of row_op(1,2) from the v_q basis of z_tuples(l, k) to the
    v_q basis of z_tuples(l, k-1), computed from the closed coefficient
    formula q_i (l_i - q_i + 1)."""
    src = z_tuples(l, k)
    dst = z_tuples(l, k - 1)
    dindex = {q: r for r, q in enumerate(dst)}
    M = [[Fraction(0)] * len(src) for _ in dst]
    for c, q in enumerate(src):
        for i in range(3):
            if q[i] > 0:
                q2 = tuple(q[j] - (1 if j == i else 0) for j in range(3))
                M[dindex[q2]][c] += Fraction(q[i] * (l[i] - q[i] + 1))
    return M


def singular_subspace(l: Sequence[int], k: int) -> List[Dict[Tuple[int, ...], Fraction]]:
    """Canonical echelon basis (leading coefficient 1, pivots in
    ascending lexicographic q-order) of the kernel of row_op(1,2) on the
    span of z_tuples(l, k)."""
    src = z_tuples(l, k)
    if k == 0:
        return [{src[0]: Fraction(1)}]
    M = raise_coeff_matrix(l, k)
    ker = linalg.kernel(M, _FOPS)
    if not ker:
        return []
    R, pivots = linalg.rref([list(v) for v in ker], _FOPS)
    out = []
    for row in R:
        if any(row):
            out.append({q: c for q, c in zip(src, row) if c})
    return out


class DualityModel:
    """The polynomial-model realization of the module with highest
    weight (hw1, hw2), glued to the abstract `FinDimModule`.

    Each basis vector of the abstract module (a PBW pivot monomial
    applied to the highest vector) is sent to the same lowering word
    applied, through the column operators, to the canonical highest
    singular vector; this is the unique isomorphism fixing that choice
    of highest vector, and it identifies the weight-mu space with the
    singular subspace at multidegree l(mu)."""

    def __init__(self, hw: Tuple[int, int]):
        self.hw = tuple(hw)
        self.fin = irrep(2, hw)
        self.rs: RootSystem = self.fin.rs
        self.m = hw[0] + 2 * hw[1]
        self.k = hw[1]
        l0 = self.l_of(hw)
        top = singular_subspace(l0, self.k)
        if len(top) != 1:
            raise RuntimeError(
                f"expected a unique highest singular vector at {l0}"
            )
        self.hw_poly = from_tensor_coords(l0, top[0])
        self.polys: List[MPoly] = []
        for depth, key in self.fin.basis:
            a, b, c = key
            p = self.hw_poly
            for _ in range(c):
                p = model_f(2, p)
            for _ in range(b):
                p = model_f12(p)
            for _ in range(a):
                p = model_f(1, p)
            self.polys.append(p)
        self._theta: Dict[Tuple[int, int], tuple] = {}

    def l_of(self, mu: Sequence) -> Tuple[int, int, int]:
        """The gl_3 weight (column multidegree) attached to the module
        weight mu: l1 - l2 and l2 - l3 are the pairing coordinates of mu
        and sum(l) = m."""
        n = depth_between(self.rs, mu, self.hw)
        if n is None:
            raise ValueError(f"weight {tuple(mu)} lies outside the module")
        l = (
            self.hw[0] + self.hw[1] - n[0],
            self.hw[1] + n[0] - n[1],
            n[1],
        )
        if any(x < 0 for x in l):
            raise ValueError(f"weight {tuple(mu)} lies outside the module")
        return l

    def mu_of(self, l: Sequence[int]) -> Tuple[Fraction, Fraction]:
        """Inverse of `l_of` on actual module weights."""
        return (
            Fraction(l[0] - l[1]),
            Fraction(l[1] - l[2]),
        )

    def theta(self, mu) -> tuple:
        """(z-tuple list, matrix) for the weight-mu block of the
        isomorphism: columns are the v_q coordinates of the images of
        the abstract weight-mu basis vectors."""
        mu = tuple(Fraction(x) for x in mu)
        ck = mu
        if ck not in self._theta:
            l = self.l_of(mu)
            zt = z_tuples(l, self.k)
            zindex = {q: r for r, q in enumerate(zt)}
            idx = self.fin.weight_space(mu)
            M = [[Fraction(0)] * len(idx) for _ in zt]
            for c, j in enumerate(idx):
                for q, coeff in tensor_coords(self.polys[j], l).items():
                    M[zindex[q]][c] = coeff
            self._theta[ck] = (zt, M)
        return self._theta[ck]

    def theta_apply(self, mu, u_coords: Sequence) -> List[Fraction]:
        """Coordinates (over z_tuples(l(mu), k)) of the model image of
        the weight-mu vector with the given abstract coordinates."""
        zt, M = self.theta(mu)
        idx = self.fin.weight_space(mu)
        comp = [Fraction(u_coords[j]) for j in idx]
        full = [Fraction(x) for x in u_coords]
        for j, x in enumerate(full):
            if j not in idx and x:
                raise ValueError("vector is not concentrated in weight mu")
        return linalg.mat_vec(M, comp, _FOPS)

    def theta_solve(self, mu, sing_coords: Sequence) -> List[Fraction]:
        """Abstract weight-mu coordinates (full-length vector) of a
        model vector given over z_tuples(l(mu), k); the vector must lie
        in the image (the singular subspace)."""
        zt, M = self.theta(mu)
        comp = linalg.solve(M, [Fraction(x) for x in sing_coords], _FOPS)
        idx = self.fin.weight_space(mu)
        out = [Fraction(0)] * self.fin.dim
        for c, j in enumerate(idx):
            out[j] = comp[c]
        return out
