"""Root data for the rank-one and rank-two simply-laced root systems
(types A1 and A2) and their Weyl groups.

Weights are row vectors of integers or rationals in fundamental-weight
coordinates: lambda = (lambda_1, ..., lambda_r) with
lambda_i = <alpha_i^vee, lambda>.  Roots are recorded by their coordinates
in the simple-root basis.  With the normalization <alpha_i, alpha_i> = 2,
the pairing of a root alpha = sum m_i alpha_i with a weight is
<alpha, lambda> = sum m_i lambda_i.

The Weyl group acts on weight coordinates by integer matrices; the dot
action is w . lambda = w(lambda + rho) - rho with rho = (1, ..., 1).
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .symcore import MPoly

Vec = Tuple[int, ...]
Mat = Tuple[Tuple[int, ...], ...]


class RootSystem:
    """Type A root system of rank 1 or 2."""

    def __init__(self, rank: int):
        if rank not in (1, 2):
            raise ValueError("only rank 1 and rank 2 are supported")
        self.rank = rank
        if rank == 1:
            self.cartan: Mat = ((2,),)
            self.lam_vars: Tuple[str, ...] = ("lam",)
        else:
            self.cartan = ((2, -1), (-1, 2))
            self.lam_vars = ("lam1", "lam2")
        self.rho: Vec = (1,) * rank

    def positive_roots(self) -> List[Vec]:
        """Positive roots in the simple-root basis, by increasing height."""
        if self.rank == 1:
            return [(1,)]
        return [(1, 0), (0, 1), (1, 1)]

    def simple_root_coords(self, i: int) -> Vec:
        """Fundamental-weight coordinates of alpha_i (a Cartan-matrix column)."""
        return tuple(self.cartan[j][i - 1] for j in range(self.rank))

    def root_coords(self, alpha: Vec) -> Vec:
        """Fundamental-weight coordinates of a root given in the alpha-basis."""
        return tuple(
            sum(m * self.cartan[j][i] for i, m in enumerate(alpha))
            for j in range(self.rank)
        )

    def pairing(self, alpha: Vec, coords: Sequence):
        """<alpha, mu> for alpha in the alpha-basis, mu in weight coordinates."""
        it = iter(zip(alpha, coords))
        m, c = next(it)
        total = m * c
        for m, c in it:
            total = total + m * c
        return total

    def height(self, alpha: Vec) -> int:
        return sum(alpha)

    def chi(self, alpha: Vec, k: int) -> MPoly:
        """The linear polynomial <alpha, lambda + rho> - k in the lambda vars."""
        v = self.lam_vars
        p = MPoly.const(v, sum(alpha) - k)
        for i, m in enumerate(alpha):
            if m:
                p = p + m * MPoly.variable(v, v[i])
        return p

    def simple_reflection_matrix(self, i: int) -> Mat:
        """Matrix of s_i on fundamental-weight coordinates (acting on columns)."""
        n = self.rank
        a = self.simple_root_coords(i)
        rows = []
        for j in range(n):
            row = [1 if j == k else 0 for k in range(n)]
            # s_i(mu) = mu - mu_i * alpha_i, so column i - 1 of mu contributes
            row[i - 1] -= a[j]
            rows.append(tuple(row))
        return tuple(rows)

    def weyl_group(self) -> "WeylGroup":
        return WeylGroup(self)

    def is_dominant_integral(self, coords: Sequence) -> bool:
        return all(isinstance(c, int) or Fraction(c).denominator == 1 for c in coords) and all(
            c >= 0 for c in coords
        )


def _mat_mul(A: Mat, B: Mat) -> Mat:
    n = len(A)
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _mat_vec_int(A: Mat, v: Sequence) -> Tuple:
    return tuple(sum(A[i][k] * v[k] for k in range(len(v))) for i in range(len(A)))


class WeylElem:
    """Weyl group element: integer matrix on weight coordinates plus a
    canonical reduced word."""

    __slots__ = ("rs", "matrix", "word")

    def __init__(self, rs: RootSystem, matrix: Mat, word: Tuple[int, ...]):
        self.rs = rs
        self.matrix = matrix
        self.word = word

    def __eq__(self, other):
        return isinstance(other, WeylElem) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return "s" + "s".join(str(i) for i in self.word) if self.word else "e"

    @property
    def length(self) -> int:
        return len(self.word)

    def act(self, coords: Sequence) -> Tuple:
        """Plain linear action on weight coordinates."""
        return _mat_vec_int(self.matrix, coords)

    def dot(self, coords: Sequence) -> Tuple:
        """Dot action w . lambda = w(lambda + rho) - rho."""
        shifted = tuple(c + 1 for c in coords)
        moved = _mat_vec_int(self.matrix, shifted)
        return tuple(c - 1 for c in moved)

    def dot_affine(self) -> Tuple[Mat, Vec]:
        """(M, s) with w . lambda = M lambda + s."""
        M = self.matrix
        s = tuple(c - 1 for c in _mat_vec_int(M, self.rs.rho))
        return M, s

    def dot_images(self) -> Dict[str, MPoly]:
        """Substitution images lam_i -> (w . lambda)_i as polynomials."""
        v = self.rs.lam_vars
        M, s = self.dot_affine()
        out: Dict[str, MPoly] = {}
        for i, name in enumerate(v):
            p = MPoly.const(v, s[i])
            for j, nj in enumerate(v):
                if M[i][j]:
                    p = p + M[i][j] * MPoly.variable(v, nj)
            out[name] = p
        return out

    def act_images(self) -> Dict[str, MPoly]:
        """Substitution images lam_i -> (w lambda)_i for the plain action."""
        v = self.rs.lam_vars
        M = self.matrix
        out: Dict[str, MPoly] = {}
        for i, name in enumerate(v):
            p = MPoly.zero(v)
            for j, nj in enumerate(v):
                if M[i][j]:
                    p = p + M[i][j] * MPoly.variable(v, nj)
            out[name] = p
        return out


class WeylGroup:
    """The full Weyl group, generated by breadth-first search."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        gens = {
            i: WeylElem(rs, rs.simple_reflection_matrix(i), (i,))
            for i in range(1, rs.rank + 1)
        }
        ident = WeylElem(rs, tuple(tuple(int(i == j) for j in range(rs.rank)) for i in range(rs.rank)), ())
        seen: Dict[Mat, WeylElem] = {ident.matrix: ident}
        queue = deque([ident])
        while queue:
            w = queue.popleft()
            for i in sorted(gens):
                m = _mat_mul(w.matrix, gens[i].matrix)  # w * s_i, word grows on the right
                if m not in seen:
                    nw = WeylElem(rs, m, w.word + (i,))
                    seen[m] = nw
                    queue.append(nw)
        self.identity = ident
        self.generators = gens
        self.elements: List[WeylElem] = sorted(
            seen.values(), key=lambda w: (w.length, w.word)
        )
        self._by_matrix = seen

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def simple(self, i: int) -> WeylElem:
        return self.generators[i]

    def from_word(self, word: Sequence[int]) -> WeylElem:
        m = self.identity.matrix
        for i in word:
            m = _mat_mul(m, self.generators[i].matrix)
        return self._by_matrix[m]

    def multiply(self, a: WeylElem, b: WeylElem) -> WeylElem:
        return self._by_matrix[_mat_mul(a.matrix, b.matrix)]

    def inverse(self, w: WeylElem) -> WeylElem:
        return self.from_word(tuple(reversed(w.word)))

    def longest(self) -> WeylElem:
        return max(self.elements, key=lambda w: w.length)

    def root_action(self, w: WeylElem, alpha: Vec) -> Vec:
        """Action of w on a root given in the alpha-basis."""
        rs = self.rs
        coords = rs.root_coords(alpha)
        moved = _mat_vec_int(w.matrix, coords)
        # convert weight coordinates back to the alpha-basis via the
        # inverse Cartan matrix (entries are rational; roots come out integral)
        if rs.rank == 1:
            m = (Fraction(moved[0], 2),)
        else:
            m = (
                Fraction(2 * moved[0] + moved[1], 3),
                Fraction(moved[0] + 2 * moved[1], 3),
            )
        if any(x.denominator != 1 for x in m):
            raise ValueError("root action did not land in the root lattice")
        return tuple(int(x) for x in m)

    def inversion_set(self, w: WeylElem) -> List[Vec]:
        """Positive roots alpha with w^{-1}(alpha) negative, i.e. the set
        of positive roots sent negative by w^{-1}."""
        winv = self.inverse(w)
        out = []
        for alpha in self.rs.positive_roots():
            img = self.root_action(winv, alpha)
            if all(x <= 0 for x in img) and any(x < 0 for x in img):
                out.append(alpha)
        return out

    def reduced_words(self, w: WeylElem) -> List[Tuple[int, ...]]:
        """All reduced words for w, lexicographically sorted."""
        if w.length == 0:
            return [()]
        words = []
        for i in sorted(self.generators):
            sw = self.multiply(self.simple(i), w)
            if sw.length == w.length - 1:
                words.extend((i,) + rest for rest in self.reduced_words(sw))
        return sorted(words)
