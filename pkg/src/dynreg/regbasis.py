"""Singular vectors of the admissible space in elementary symmetric form.

The level-``k`` admissible space attached to weights ``(l1, l2, l3)`` has a
distinguished singular part: the joint kernel of the raising action, which
consists of the admissible symmetric polynomials of degree at most one in
every ``t`` variable.  This module produces an explicit basis of that part
inside the span of the elementary symmetric polynomials
``sigma_0, ..., sigma_k`` of ``t_1, ..., t_k``.

A combination ``sum_r X_r(z) * sigma_r(t)`` is admissible exactly when, for
every leg ``i`` with ``l_i < k``, substituting the string
``z_i, z_i - 1, ..., z_i - l_i`` for ``l_i + 1`` of the ``t`` variables
makes it vanish identically in the remaining variables.  Splitting each
elementary symmetric polynomial over the two groups of points turns this
into a linear system for the coefficient vector ``(X_0, ..., X_k)`` whose
entries are elementary symmetric polynomials of the strings themselves.
The leading square block of the system is invertible, and its determinant
divides every other maximal minor, so normalizing one trailing coefficient
to 1 and clearing the rest yields solutions with polynomial coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import List, Sequence, Tuple

from . import linalg
from .symcore import MPoly, exact_divide
from .yangweights import SymPolyH, Z_VARS, h_vars


class SingularBasisError(ArithmeticError):
    """The constraint matrix violated the expected pivot structure."""


def _validate(l: Sequence[int], k: int) -> Tuple[Tuple[int, int, int], int]:
    l = tuple(int(x) for x in l)
    if len(l) != 3 or any(x < 0 for x in l):
        raise ValueError("expected three nonnegative weights")
    k = int(k)
    if k < 0:
        raise ValueError("level must be nonnegative")
    return l, k


@lru_cache(maxsize=None)
def elementary_symmetric(k: int, r: int) -> SymPolyH:
    """``sigma_r(t_1, ..., t_k)`` as an element of the level-``k`` space."""
    if not 0 <= r <= k:
        raise ValueError("elementary symmetric degree out of range")
    terms = {}
    for subset in combinations(range(k), r):
        e = [0] * (k + 3)
        for a in subset:
            e[a] = 1
        terms[tuple(e)] = Fraction(1)
    return SymPolyH(k, MPoly(h_vars(k), terms), check=False)


@lru_cache(maxsize=None)
def _string_sigmas(zvar: str, length: int) -> Tuple[MPoly, ...]:
    """All elementary symmetric polynomials of the ``length + 1`` points
    ``zvar, zvar - 1, ..., zvar - length``, indexed by degree."""
    z = MPoly.variable(Z_VARS, zvar)
    sig = [MPoly.const(Z_VARS, 1)]
    for j in range(length + 1):
        point = z - j
        nxt = [sig[0]]
        for r in range(1, len(sig) + 1):
            term = point * sig[r - 1]
            if r < len(sig):
                term = term + sig[r]
            nxt.append(term)
        sig = nxt
    return tuple(sig)


def string_sigma(r: int, zvar: str, length: int) -> MPoly:
    """``sigma_r`` of the string ``zvar, zvar - 1, ..., zvar - length``;
    zero when ``r`` exceeds the number of points."""
    if r < 0:
        raise ValueError("elementary symmetric degree out of range")
    if length < 0:
        raise ValueError("string length must be nonnegative")
    sig = _string_sigmas(zvar, length)
    return sig[r] if r < len(sig) else MPoly.zero(Z_VARS)


def sigma_system(l: Sequence[int], k: int) -> List[List[MPoly]]:
    """Constraint matrix for admissibility of ``sum_r X_r sigma_r``.

    There is one row per leg ``i`` with ``l_i < k`` and residual degree
    ``s`` in ``0..k - l_i - 1``; the column-``r`` entry is ``sigma_{r-s}``
    of the string at leg ``i`` (zero for ``r < s``).  Row order: legs in
    increasing order, residual degrees increasing within a leg."""
    l, k = _validate(l, k)
    rows: List[List[MPoly]] = []
    zero = MPoly.zero(Z_VARS)
    for i, li in enumerate(l):
        if li >= k:
            continue
        for s in range(k - li):
            rows.append(
                [
                    string_sigma(r - s, Z_VARS[i], li) if r >= s else zero
                    for r in range(k + 1)
                ]
            )
    return rows


def singular_multiplicity(l: Sequence[int], k: int) -> int:
    """Dimension of the singular part of the level-``k`` admissible space:
    the number of irreducible components of the triple tensor product whose
    highest vector sits at depth ``k``."""
    l, k = _validate(l, k)
    a, b, c = sorted(l)
    lo = max(0, k - c)
    hi = min(a, a + b - k, k)
    return max(0, hi - lo + 1)


def leftmost_minor(l: Sequence[int], k: int) -> MPoly:
    """Determinant of the leading square block of the constraint matrix."""
    rows = sigma_system(l, k)
    nr = len(rows)
    if nr > k + 1:
        raise ValueError("constraint matrix has more rows than columns")
    return linalg.poly_det([row[:nr] for row in rows], Z_VARS)


def maximal_minor(l: Sequence[int], k: int, cols: Sequence[int]) -> MPoly:
    """Determinant of the constraint-matrix submatrix on ``cols``."""
    rows = sigma_system(l, k)
    cols = tuple(cols)
    if len(cols) != len(rows):
        raise ValueError("need as many columns as constraint rows")
    return linalg.poly_det([[row[c] for c in cols] for row in rows], Z_VARS)


def sigma_basis_coefficients(l: Sequence[int], k: int) -> List[List[MPoly]]:
    """Coefficient vectors ``(X_0, ..., X_k)`` of the singular basis.

    The ``s``-th vector (``s = 1..d``) has ``X_{k-s+1} = 1``, the other
    trailing ``d - 1`` coefficients zero, and polynomial leading
    coefficients obtained by clearing the constraints."""
    l, k = _validate(l, k)
    rows = sigma_system(l, k)
    one = MPoly.const(Z_VARS, 1)
    zero = MPoly.zero(Z_VARS)
    if not rows:
        out = []
        for s in range(1, k + 2):
            vec = [zero] * (k + 1)
            vec[k - s + 1] = one
            out.append(vec)
        return out
    M, pivots = linalg.bareiss_echelon(rows)
    nr = len(pivots)
    if pivots != list(range(nr)):
        raise SingularBasisError(
            "leading columns of the constraint matrix are linearly dependent"
        )
    d = (k + 1) - nr
    p_last = M[nr - 1][pivots[-1]]
    out = []
    for s in range(1, d + 1):
        fc = k - s + 1
        vec = [zero] * (k + 1)
        vec[fc] = one
        for row, pc in enumerate(pivots):
            num = M[row][fc]
            if not num.is_zero():
                # exactness here is the minor-divisibility property of the
                # constraint matrix; a failed division would disprove it
                vec[pc] = exact_divide(-num, p_last)
        out.append(vec)
    return out


def sigma_basis(l: Sequence[int], k: int) -> List[SymPolyH]:
    """Basis of the singular part of the level-``k`` admissible space, as
    combinations of elementary symmetric polynomials with polynomial
    coefficients; the ``s``-th element has ``sigma_{k-s+1}``-coefficient 1
    and no other trailing elementary symmetric component."""
    l, k = _validate(l, k)
    basis = []
    for vec in sigma_basis_coefficients(l, k):
        elem = SymPolyH.zero(k)
        for r, coeff in enumerate(vec):
            if not coeff.is_zero():
                elem = elem + coeff * elementary_symmetric(k, r)
        basis.append(elem)
    return basis


def shifted_binomial_det(a: int, b: int, c: int) -> Fraction:
    """Determinant of the ``(c+1) x (c+1)`` matrix with entries
    ``binomial(a + b, a + j - i)``."""
    if min(a, b, c) < 0:
        raise ValueError("parameters must be nonnegative")
    n = a + b
    M = [
        [
            Fraction(comb(n, a + j - i)) if 0 <= a + j - i <= n else Fraction(0)
            for j in range(c + 1)
        ]
        for i in range(c + 1)
    ]
    return linalg.det(M, linalg.FractionOps)


def shifted_binomial_product(a: int, b: int, c: int) -> Fraction:
    """Closed product form of :func:`shifted_binomial_det`:
    ``prod_{i=1}^{c+1} prod_{j=1}^{a} prod_{s=1}^{b}
    (i + j + s - 1) / (i + j + s - 2)``."""
    if min(a, b, c) < 0:
        raise ValueError("parameters must be nonnegative")
    out = Fraction(1)
    for i in range(1, c + 2):
        for j in range(1, a + 1):
            for s in range(1, b + 1):
                out *= Fraction(i + j + s - 1, i + j + s - 2)
    return out
