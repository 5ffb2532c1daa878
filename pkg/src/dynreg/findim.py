"""Finite-dimensional irreducible modules for sl2 and sl3.

A module is built as the quotient of the Verma module with the same
(dominant integral) highest weight by the kernel of the contravariant
form: in each weight space the Gram matrix of the PBW monomials is row
reduced, the pivot monomials give a canonical basis of the quotient, and
every monomial is rewritten in that basis through the Gram relations.
All generator actions become exact rational matrices; the dimension is
checked against the Weyl dimension formula.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .envelope import (
    act_e,
    act_f,
    apply_transpose,
    key_depth,
    pbw_keys,
    unit_key,
    verma_weight_coords,
)
from .linalg import FractionOps
from .rootdata import RootSystem, WeylElem
from .symcore import RatFun

Coords = Tuple[Fraction, ...]


class FinDimModule:
    """A finite-dimensional irreducible highest-weight module."""

    def __init__(self, rank: int, hw: Sequence[int]):
        if any(int(x) != x or x < 0 for x in hw):
            raise ValueError("highest weight must be dominant integral")
        self.rank = rank
        self.hw = tuple(int(x) for x in hw)
        self.rs = RootSystem(rank)
        self._build()

    # -- construction ------------------------------------------------------

    def _depths(self) -> List[Tuple[int, ...]]:
        if self.rank == 1:
            return [(n,) for n in range(self.hw[0] + 2)]
        bound = self.hw[0] + self.hw[1] + 1
        return sorted(iproduct(range(bound + 1), repeat=2))

    def _build(self):
        rank, hw = self.rank, self.hw
        lam = tuple(Fraction(x) for x in hw)
        F = FractionOps
        u = unit_key(rank)

        self.basis: List[Tuple[Tuple[int, ...], Tuple[int, ...]]] = []
        self._pivots: Dict[Tuple[int, ...], List[Tuple[int, ...]]] = {}
        self._reduce: Dict[Tuple[int, ...], Dict[Tuple[int, ...], List[Fraction]]] = {}

        for depth in self._depths():
            keys = pbw_keys(rank, depth)
            gram = []
            for ki in keys:
                row = []
                for kj in keys:
                    w = apply_transpose(rank, ki, {kj: 1}, lam)
                    row.append(Fraction(w.get(u, 0)))
                gram.append(row)
            R, piv = linalg.rref(gram, F)
            pkeys = [keys[p] for p in piv]
            self._pivots[depth] = pkeys
            # column j of the Gram matrix is sum_r R[r][j] * (pivot column r),
            # which is exactly the rewriting of monomial j in the pivot basis
            table: Dict[Tuple[int, ...], List[Fraction]] = {}
            for j, kj in enumerate(keys):
                table[kj] = [R[r][j] for r in range(len(piv))]
            self._reduce[depth] = table
            for pk in pkeys:
                self.basis.append((depth, pk))

        self.dim = len(self.basis)
        self.index = {bk: i for i, bk in enumerate(self.basis)}
        self.weights: List[Coords] = [
            verma_weight_coords(self.rs, tuple(Fraction(x) for x in hw), depth)
            for depth, _ in self.basis
        ]
        self.weight_index: Dict[Coords, List[int]] = {}
        for i, wt in enumerate(self.weights):
            self.weight_index.setdefault(wt, []).append(i)

        expected = (
            hw[0] + 1
            if rank == 1
            else (hw[0] + 1) * (hw[1] + 1) * (hw[0] + hw[1] + 2) // 2
        )
        if self.dim != expected:
            raise AssertionError(
                f"dimension {self.dim} disagrees with the Weyl formula {expected}"
            )

        self.mats: Dict[str, List[List[Fraction]]] = {}
        gens = ["f", "e"] if rank == 1 else ["f1", "f2", "e1", "e2"]
        for name in gens:
            self.mats[name] = self._generator_matrix(name, lam)
        if rank == 1:
            self.mats["h"] = self._diag([wt[0] for wt in self.weights])
        else:
            self.mats["h1"] = self._diag([wt[0] for wt in self.weights])
            self.mats["h2"] = self._diag([wt[1] for wt in self.weights])

    def _diag(self, scalars) -> List[List[Fraction]]:
        n = self.dim
        return [
            [Fraction(scalars[i]) if i == j else Fraction(0) for j in range(n)]
            for i in range(n)
        ]

    def _project(self, depth, verma_vec) -> Dict[int, Fraction]:
        """Image of a Verma vector concentrated at one depth, as module
        coordinates {basis index: coefficient}."""
        out: Dict[int, Fraction] = {}
        if depth not in self._reduce:
            if verma_vec:
                raise AssertionError("vector escapes the stored depth range")
            return out
        table = self._reduce[depth]
        pkeys = self._pivots[depth]
        for key, c in verma_vec.items():
            for pk, x in zip(pkeys, table[key]):
                if x:
                    i = self.index[(depth, pk)]
                    out[i] = out.get(i, Fraction(0)) + c * x
        return {i: c for i, c in out.items() if c != 0}

    def _generator_matrix(self, name: str, lam) -> List[List[Fraction]]:
        n = self.dim
        M = [[Fraction(0)] * n for _ in range(n)]
        for j, (depth, key) in enumerate(self.basis):
            v = {key: Fraction(1)}
            if name.startswith("f"):
                i = 1 if self.rank == 1 else int(name[1])
                img = act_f(self.rank, i, v)
            else:
                i = 1 if self.rank == 1 else int(name[1])
                img = act_e(self.rank, i, v, lam)
            by_depth: Dict[Tuple[int, ...], Dict] = {}
            for k, c in img.items():
                by_depth.setdefault(key_depth(k), {})[k] = c
            for d2, vec in by_depth.items():
                for i2, c in self._project(d2, vec).items():
                    M[i2][j] += c
        return M

    # -- basic queries -----------------------------------------------------

    def hw_index(self) -> int:
        return self.index[(self._depths()[0], unit_key(self.rank))]

    def weight_space(self, coords) -> List[int]:
        return self.weight_index.get(tuple(Fraction(c) for c in coords), [])

    def weight_space_dim(self, coords) -> int:
        return len(self.weight_space(coords))

    def zero_vec(self):
        return [Fraction(0)] * self.dim

    def basis_vec(self, i: int):
        v = self.zero_vec()
        v[i] = Fraction(1)
        return v

    def apply(self, name: str, vec: Sequence) -> List:
        """Apply a generator matrix to a coordinate vector (entries may be
        Fractions or symbolic)."""
        M = self.mats[name]
        out = []
        for i in range(self.dim):
            s = 0
            row = M[i]
            for j, x in enumerate(vec):
                if row[j] and not (isinstance(x, Fraction) and x == 0):
                    s = s + row[j] * x
            out.append(s)
        return out

    def apply_e12(self, vec: Sequence) -> List:
        a = self.apply("e1", self.apply("e2", vec))
        b = self.apply("e2", self.apply("e1", vec))
        return [x - y for x, y in zip(a, b)]

    def apply_f12(self, vec: Sequence) -> List:
        a = self.apply("f1", self.apply("f2", vec))
        b = self.apply("f2", self.apply("f1", vec))
        return [x - y for x, y in zip(a, b)]

    def apply_raise_twist(self, key: Tuple[int, ...], vec: Sequence) -> List:
        """Apply X(x) for the lowering PBW monomial x with the given
        exponents, where X is the algebra homomorphism determined by
        X(f_i) = -e_i (so X(f12) = [-e1, -e2] = e12 and
        X(f1^a f12^b f2^c) = (-1)^(a+c) e1^a e12^b e2^c).

        This is the twist entering the singular tensor: writing the left
        multiplication f_k g_j = sum_m C_mj g_m in the PBW basis, the
        Shapovalov Gram matrices satisfy S_{nu-alpha_k} E = C^T S_nu with
        E the matrix of e_k on the Verma, and the e-annihilation of
        sum (S_nu^{-1})_{ij} g_i (x) X(g_j) u reduces to
        X(f_k g) = -e_k X(g), i.e. exactly the homomorphism property."""
        if self.rank == 1:
            (a,) = key
            for _ in range(a):
                vec = self.apply("e", vec)
            return [-x for x in vec] if a % 2 else list(vec)
        a, b, c = key
        for _ in range(c):
            vec = self.apply("e2", vec)
        for _ in range(b):
            vec = self.apply_e12(vec)
        for _ in range(a):
            vec = self.apply("e1", vec)
        return [-x for x in vec] if (a + c) % 2 else list(vec)

    # -- sl2 strings and the flip operators --------------------------------

    def sl2_strings(self, i: int) -> List[Tuple[int, List[List[Fraction]]]]:
        """Decomposition into strings for the i-th sl2 triple: returns a
        list of (n, [v_0, ..., v_n]) with e_i v_0 = 0, v_k = f_i^k v_0, and
        the string spanning an (n+1)-dimensional irreducible."""
        ename = "e" if self.rank == 1 else f"e{i}"
        fname = "f" if self.rank == 1 else f"f{i}"
        alpha = self.rs.root_coords(tuple(1 if t == i - 1 else 0 for t in range(self.rank)))
        strings = []
        for wt, idx in sorted(self.weight_index.items()):
            up = tuple(a + b for a, b in zip(wt, alpha))
            rows = self.weight_index.get(up, [])
            # kernel of e_i restricted to this weight space
            if rows:
                sub = [[self.mats[ename][r][c] for c in idx] for r in rows]
                kern = linalg.kernel(sub, FractionOps)
            else:
                kern = [[Fraction(int(a == b)) for b in range(len(idx))] for a in range(len(idx))]
            n = int(wt[i - 1])
            for kv in kern:
                if n < 0:
                    raise AssertionError("string top with negative length")
                top = self.zero_vec()
                for c, j in zip(kv, idx):
                    top[j] = c
                chain = [top]
                for _ in range(n):
                    chain.append(self.apply(fname, chain[-1]))
                strings.append((n, chain))
        total = sum(n + 1 for n, _ in strings)
        if total != self.dim:
            raise AssertionError("string decomposition does not fill the module")
        return strings

    def flip_matrix(self, i: int, weighted: bool = False) -> List[List[Fraction]]:
        """The string-reversing involution for the i-th sl2 triple:
        f_i^k v_0 -> f_i^(n-k) v_0 on each string of length n + 1; with
        weighted=True the image is scaled by k!/(n-k)!."""
        from math import factorial

        cols: List[List[Fraction]] = []
        imgs: List[List[Fraction]] = []
        for n, chain in self.sl2_strings(i):
            for k in range(n + 1):
                cols.append(chain[k])
                target = chain[n - k]
                if weighted:
                    scale = Fraction(factorial(k), factorial(n - k))
                    target = [scale * x for x in target]
                imgs.append(target)
        B = linalg.transpose(cols)
        T = linalg.transpose(imgs)
        Binv = linalg.inv(B, FractionOps)
        return linalg.mat_mul(T, Binv, FractionOps)

    def flip_for(self, w: WeylElem, weighted: bool = False) -> List[List[Fraction]]:
        """Product of string flips along a reduced word for w, composed in
        the same order as the reflections act."""
        out = linalg.identity(self.dim, FractionOps)
        for i in w.word:
            out = linalg.mat_mul(out, self.flip_matrix(i, weighted=weighted), FractionOps)
        return out

    # -- the zero weight space of the adjoint module -----------------------

    def cartan_basis(self) -> List[List[Fraction]]:
        """For the rank-2 adjoint module (highest weight (1,1)): the ordered
        basis (f1 f2 v, f2 f1 v) of the zero weight space, v the highest
        vector.  Under the identification of the module with the Lie
        algebra that sends v to [e1, e2], these are the Cartan elements
        [e1, f1] and [f2, e2]."""
        if self.rank != 2 or self.hw != (1, 1):
            raise ValueError("cartan_basis is defined for the adjoint module")
        v = self.basis_vec(self.hw_index())
        u1 = self.apply("f1", self.apply("f2", v))
        u2 = self.apply("f2", self.apply("f1", v))
        return [u1, u2]

    def matrix_on_weight(self, full_matrix, coords, basis_vecs: Optional[List] = None):
        """Restrict an endomorphism (given over any field containing the
        rationals) that preserves the given weight space, and express it in
        the supplied basis of that space (default: the module basis
        vectors).  Entries of full_matrix may be Fractions or RatFuns."""
        idx = self.weight_space(coords)
        block = [[full_matrix[r][c] for c in idx] for r in idx]
        if basis_vecs is None:
            return block
        T = [[v[r] for v in basis_vecs] for r in idx]
        sample = next(x for row in full_matrix for x in row)
        if isinstance(sample, RatFun):
            F = linalg.RatFunOps(sample.vars)
            T = [[RatFun.const(sample.vars, x) for x in row] for row in T]
        else:
            F = FractionOps
        return linalg.mat_mul(
            linalg.inv(T, F), linalg.mat_mul(block, T, F), F
        )


def irrep(rank: int, hw: Sequence[int]) -> FinDimModule:
    return FinDimModule(rank, hw)
