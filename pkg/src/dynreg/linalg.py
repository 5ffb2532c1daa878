"""Exact linear algebra over an arbitrary field.

Matrices are plain lists of lists.  The field is described by a small ops
object with `zero`, `one`, `add`, `sub`, `mul`, `div`, `is_zero`; adapters
are provided for `fractions.Fraction` and for `symcore.RatFun`.  All
routines use fraction-free-friendly Gaussian elimination with exact
arithmetic; nothing is ever rounded.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, List, Sequence, TypeVar

from .symcore import MPoly, RatFun

T = TypeVar("T")


class FractionOps:
    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def div(a, b):
        return a / b

    @staticmethod
    def is_zero(a):
        return a == 0


class RatFunOps:
    """Field ops for rational functions in a fixed variable tuple."""

    def __init__(self, vars):
        self.vars = tuple(vars)
        self.zero = RatFun.const(self.vars, 0)
        self.one = RatFun.const(self.vars, 1)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def div(a, b):
        return a / b

    @staticmethod
    def is_zero(a):
        return a.is_zero()


def identity(n: int, F) -> List[List[T]]:
    return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]


def mat_mul(A: Sequence[Sequence[T]], B: Sequence[Sequence[T]], F) -> List[List[T]]:
    n, k = len(A), len(B)
    m = len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = F.zero
            for t in range(k):
                if not F.is_zero(A[i][t]):
                    s = F.add(s, F.mul(A[i][t], B[t][j]))
            row.append(s)
        out.append(row)
    return out


def mat_vec(A: Sequence[Sequence[T]], v: Sequence[T], F) -> List[T]:
    out = []
    for row in A:
        s = F.zero
        for a, x in zip(row, v):
            if not F.is_zero(a):
                s = F.add(s, F.mul(a, x))
        out.append(s)
    return out


def mat_sub(A, B, F):
    return [[F.sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_eq(A, B, F) -> bool:
    if len(A) != len(B):
        return False
    for ra, rb in zip(A, B):
        if len(ra) != len(rb):
            return False
        for a, b in zip(ra, rb):
            if not F.is_zero(F.sub(a, b)):
                return False
    return True


def transpose(A):
    return [list(col) for col in zip(*A)]


def scalar_mul(c, A, F):
    return [[F.mul(c, a) for a in row] for row in A]


def det(A: Sequence[Sequence[T]], F) -> T:
    """Determinant by exact Gaussian elimination with partial pivoting."""
    n = len(A)
    M = [list(row) for row in A]
    sign = False
    d = F.one
    for col in range(n):
        piv = next((r for r in range(col, n) if not F.is_zero(M[r][col])), None)
        if piv is None:
            return F.zero
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            sign = not sign
        p = M[col][col]
        d = F.mul(d, p)
        for r in range(col + 1, n):
            if F.is_zero(M[r][col]):
                continue
            f = F.div(M[r][col], p)
            M[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[r], M[col])]
    return F.sub(F.zero, d) if sign else d


class SingularMatrixError(ArithmeticError):
    pass


def inv(A: Sequence[Sequence[T]], F) -> List[List[T]]:
    n = len(A)
    M = [list(row) + list(identity(n, F)[i]) for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not F.is_zero(M[r][col])), None)
        if piv is None:
            raise SingularMatrixError("matrix is not invertible")
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [F.div(x, p) for x in M[col]]
        for r in range(n):
            if r == col or F.is_zero(M[r][col]):
                continue
            f = M[r][col]
            M[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


def solve(A: Sequence[Sequence[T]], b: Sequence[T], F) -> List[T]:
    """Solve A x = b exactly (A square or tall with full column rank and a
    consistent right-hand side); raises SingularMatrixError otherwise."""
    n, m = len(A), len(A[0]) if A else 0
    M = [list(row) + [b[i]] for i, row in enumerate(A)]
    R, pivots = rref(M, F, last_col_special=True)
    # inconsistency: pivot in the last column
    for r, row in enumerate(R):
        if all(F.is_zero(x) for x in row[:m]) and not F.is_zero(row[m]):
            raise SingularMatrixError("inconsistent linear system")
    if len(pivots) < m:
        raise SingularMatrixError("linear system is underdetermined")
    x = [F.zero] * m
    for r, c in enumerate(pivots):
        x[c] = R[r][m]
    return x


def rref(A: Sequence[Sequence[T]], F, last_col_special: bool = False):
    """Reduced row echelon form; returns (R, pivot_columns).
    If last_col_special, never pivots on the final column."""
    R = [list(row) for row in A]
    n = len(R)
    m = len(R[0]) if R else 0
    stop = m - 1 if last_col_special else m
    pivots: List[int] = []
    r = 0
    for c in range(stop):
        piv = next((i for i in range(r, n) if not F.is_zero(R[i][c])), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        p = R[r][c]
        R[r] = [F.div(x, p) for x in R[r]]
        for i in range(n):
            if i == r or F.is_zero(R[i][c]):
                continue
            f = R[i][c]
            R[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return R, pivots


def rank(A, F) -> int:
    if not A:
        return 0
    _, pivots = rref(A, F)
    return len(pivots)


def kernel(A: Sequence[Sequence[T]], F) -> List[List[T]]:
    """Basis of the right kernel of A, one vector per free column, in
    ascending free-column order with a 1 in the free position."""
    if not A:
        return []
    m = len(A[0])
    R, pivots = rref(A, F)
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fc in free:
        v = [F.zero] * m
        v[fc] = F.one
        for r, pc in enumerate(pivots):
            v[pc] = F.sub(F.zero, R[r][fc])
        basis.append(v)
    return basis


def solve_matrix(A, B, F) -> List[List[T]]:
    """Solve A X = B column by column."""
    cols = transpose(B)
    xs = [solve(A, c, F) for c in cols]
    return transpose(xs)


def from_fraction_matrix(A: Sequence[Sequence[Fraction]], vars) -> List[List[RatFun]]:
    return [[RatFun.const(vars, x) for x in row] for row in A]


def evaluate_matrix(A: Sequence[Sequence[RatFun]], binding) -> List[List[Fraction]]:
    return [[x.evaluate(binding) for x in row] for row in A]


# -- fraction-free elimination over a polynomial ring -----------------------
#
# Gaussian elimination over the fraction field of a multivariate polynomial
# ring suffers badly from intermediate expression swell when every entry is
# re-normalized by a gcd.  The Bareiss/Montante scheme avoids the fraction
# field entirely: every intermediate entry is a minor of the input matrix,
# obtained by exact polynomial divisions only.


def bareiss_echelon(A: Sequence[Sequence[MPoly]]):
    """Fraction-free Gauss-Jordan elimination of a polynomial matrix.
    Returns (M, pivots) where pivots maps pivot row -> column and every
    non-pivot entry of a pivot column in M is zero.  After completion all
    pivot entries are equal (to the determinant of the pivot submatrix)."""
    from .symcore import exact_divide

    M = [list(row) for row in A]
    n = len(M)
    m = len(M[0]) if M else 0
    prev = None
    pivots: List[int] = []
    r = 0
    for c in range(m):
        if r >= n:
            break
        cand = [i for i in range(r, n) if not M[i][c].is_zero()]
        if not cand:
            continue
        best = min(cand, key=lambda i: len(M[i][c].terms))
        M[r], M[best] = M[best], M[r]
        p = M[r][c]
        for i in range(n):
            if i == r:
                continue
            q = M[i][c]
            for j in range(m):
                t = p * M[i][j] - q * M[r][j]
                M[i][j] = t if prev is None else exact_divide(t, prev)
        prev = p
        pivots.append(c)
        r += 1
    return M, pivots


def poly_kernel(A: Sequence[Sequence[MPoly]], vars) -> List[List[MPoly]]:
    """Basis of the right kernel of a polynomial matrix over the fraction
    field, scaled to polynomial vectors: one vector per free column with
    the last pivot minor in the free position."""
    if not A:
        return []
    m = len(A[0])
    M, pivots = bareiss_echelon(A)
    if not pivots:
        out = []
        for fc in range(m):
            v = [MPoly.zero(vars)] * m
            v[fc] = MPoly.const(vars, 1)
            out.append(v)
        return out
    p_last = M[len(pivots) - 1][pivots[-1]]
    free = [c for c in range(m) if c not in pivots]
    out = []
    for fc in free:
        v = [MPoly.zero(vars)] * m
        v[fc] = p_last
        for row, pc in enumerate(pivots):
            v[pc] = -M[row][fc]
        out.append(v)
    return out


def poly_det(A: Sequence[Sequence[MPoly]], vars) -> MPoly:
    """Determinant of a square polynomial matrix by fraction-free forward
    elimination (the result is exact, with sign tracking for row swaps)."""
    from .symcore import exact_divide

    M = [list(row) for row in A]
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return MPoly.const(vars, 1)
    sign = 1
    prev = None
    for c in range(n):
        cand = [i for i in range(c, n) if not M[i][c].is_zero()]
        if not cand:
            return MPoly.zero(vars)
        best = min(cand, key=lambda i: len(M[i][c].terms))
        if best != c:
            M[c], M[best] = M[best], M[c]
            sign = -sign
        p = M[c][c]
        for i in range(c + 1, n):
            q = M[i][c]
            for j in range(c, n):
                t = p * M[i][j] - q * M[c][j]
                M[i][j] = t if prev is None else exact_divide(t, prev)
        prev = p
    return M[n - 1][n - 1] if sign > 0 else -M[n - 1][n - 1]
