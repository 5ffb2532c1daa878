"""Verma modules for sl2 and sl3 in exact arithmetic.

A vector in the Verma module M_lambda is a dict mapping PBW exponent keys
to coefficients.  For sl2 the key is (a,) and stands for f^a v_lambda.
For sl3 the key is (a, b, c) and stands for f1^a f12^b f2^c v_lambda,
where f12 = [f1, f2] (central in the lower-triangular subalgebra).

Coefficients may be ints, Fractions, MPolys or RatFuns; the action
formulas only use ring operations and the highest-weight coordinates
supplied by the caller, so the same code runs numerically or symbolically.

Action formulas (sl3, key (a, b, c), weight depth n1 = a + b, n2 = b + c):

    f1 (a,b,c) = (a+1,b,c)
    f2 (a,b,c) = (a,b,c+1) - a (a-1,b+1,c)
    e1 (a,b,c) = a (lam1 - a - b + c + 1) (a-1,b,c) + b (a,b-1,c+1)
    e2 (a,b,c) = c (lam2 - c + 1) (a,b,c-1) - b (a+1,b-1,c)
    h_i acts by <lambda - n1 alpha1 - n2 alpha2, alpha_i^vee>

The contravariant (Shapovalov) form S(x, y) pairs PBW monomials via the
transpose antiautomorphism tau with tau(f_i) = e_i; the companion algebra
homomorphism X(f_i) = -e_i enters the canonical singular tensor.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from . import linalg
from .rootdata import RootSystem, WeylElem
from .symcore import MPoly, RatFun

Key = Tuple[int, ...]
Vec = Dict[Key, object]


def unit_key(rank: int) -> Key:
    return (0,) if rank == 1 else (0, 0, 0)


def key_depth(key: Key) -> Tuple[int, ...]:
    """Weight depth (n1,) or (n1, n2) of a PBW monomial: the monomial has
    weight lambda - n1 alpha1 - n2 alpha2."""
    if len(key) == 1:
        return (key[0],)
    a, b, c = key
    return (a + b, b + c)


def pbw_keys(rank: int, depth: Tuple[int, ...]) -> List[Key]:
    """PBW exponent keys of the given weight depth, in a canonical order
    (descending lexicographic)."""
    if rank == 1:
        return [(depth[0],)]
    n1, n2 = depth
    keys = []
    for b in range(min(n1, n2), -1, -1):
        a, c = n1 - b, n2 - b
        keys.append((a, b, c))
    return sorted(keys, reverse=True)


def vec_add(u: Vec, v: Vec) -> Vec:
    out = dict(u)
    for k, c in v.items():
        s = out.get(k, 0) + c
        if s == 0:
            out.pop(k, None)
        else:
            out[k] = s
    return out


def vec_scale(c, v: Vec) -> Vec:
    if c == 0:
        return {}
    return {k: c * x for k, x in v.items()}


def vec_eq(u: Vec, v: Vec) -> bool:
    return all(c == 0 for c in vec_add(u, vec_scale(-1, v)).values())


def act_f(rank: int, i: int, v: Vec) -> Vec:
    out: Vec = {}

    def put(key, c):
        s = out.get(key, 0) + c
        if s == 0:
            out.pop(key, None)
        else:
            out[key] = s

    if rank == 1:
        for (a,), c in v.items():
            put((a + 1,), c)
        return out
    for (a, b, c3), c in v.items():
        if i == 1:
            put((a + 1, b, c3), c)
        else:
            put((a, b, c3 + 1), c)
            if a:
                put((a - 1, b + 1, c3), -a * c)
    return out


def act_f12(v: Vec) -> Vec:
    return {(a, b + 1, c3): c for (a, b, c3), c in v.items()}


def act_e(rank: int, i: int, v: Vec, lam: Sequence) -> Vec:
    out: Vec = {}

    def put(key, c):
        if c == 0:
            return
        s = out.get(key, 0) + c
        if s == 0:
            out.pop(key, None)
        else:
            out[key] = s

    if rank == 1:
        for (a,), c in v.items():
            if a:
                put((a - 1,), c * a * (lam[0] - (a - 1)))
        return out
    for (a, b, c3), c in v.items():
        if i == 1:
            if a:
                put((a - 1, b, c3), c * a * (lam[0] - a - b + c3 + 1))
            if b:
                put((a, b - 1, c3 + 1), c * b)
        else:
            if c3:
                put((a, b, c3 - 1), c * c3 * (lam[1] - c3 + 1))
            if b:
                put((a + 1, b - 1, c3), -c * b)
    return out


def act_e12(v: Vec, lam: Sequence) -> Vec:
    """e12 = e1 e2 - e2 e1 on a rank-2 Verma vector."""
    a = act_e(2, 1, act_e(2, 2, v, lam), lam)
    b = act_e(2, 2, act_e(2, 1, v, lam), lam)
    return vec_add(a, vec_scale(-1, b))


def act_h(rank: int, i: int, v: Vec, lam: Sequence) -> Vec:
    out: Vec = {}
    for key, c in v.items():
        d = key_depth(key)
        if rank == 1:
            scal = lam[0] - 2 * d[0]
        elif i == 1:
            scal = lam[0] - (2 * d[0] - d[1])
        else:
            scal = lam[1] - (-d[0] + 2 * d[1])
        cc = c * scal
        if cc != 0:
            out[key] = cc
    return out


def apply_pbw_monomial(rank: int, key: Key, v: Vec) -> Vec:
    """Apply the lowering monomial with the given exponents to v."""
    if rank == 1:
        for _ in range(key[0]):
            v = act_f(1, 1, v)
        return v
    a, b, c = key
    for _ in range(c):
        v = act_f(2, 2, v)
    for _ in range(b):
        v = act_f12(v)
    for _ in range(a):
        v = act_f(2, 1, v)
    return v


def apply_lowering(rank: int, elem: Vec, v: Vec) -> Vec:
    """Apply an element of the lowering subalgebra (a PBW-coefficient dict)
    to a module vector."""
    out: Vec = {}
    for key, c in elem.items():
        out = vec_add(out, vec_scale(c, apply_pbw_monomial(rank, key, v)))
    return out


def normal_order(rank: int, word: Sequence[Tuple[int, int]]) -> Vec:
    """PBW coordinates of the product f_{i1}^{g1} ... f_{il}^{gl}.

    The word is a sequence of (i, power) pairs; the result is the
    coefficient dict of the normally ordered product, obtained by acting
    on the cyclic vector (the f-action involves no lambda)."""
    v: Vec = {unit_key(rank): 1}
    for i, power in reversed(list(word)):
        for _ in range(power):
            v = act_f(rank, i, v)
    return v


def apply_transpose(rank: int, key: Key, v: Vec, lam: Sequence) -> Vec:
    """Apply tau(x) for the PBW monomial x with the given exponents, tau
    being the transpose antiautomorphism with tau(f_i) = e_i, so
    tau(f1^a f12^b f2^c) = (-1)^b e2^c e12^b e1^a."""
    if rank == 1:
        (a,) = key
        for _ in range(a):
            v = act_e(1, 1, v, lam)
        return v
    a, b, c = key
    for _ in range(a):
        v = act_e(2, 1, v, lam)
    for _ in range(b):
        v = act_e12(v, lam)
    for _ in range(c):
        v = act_e(2, 2, v, lam)
    return vec_scale(-1, v) if b % 2 else v


def shapovalov_matrix(rank: int, depth: Tuple[int, ...]):
    """Contravariant form on the PBW basis at the given depth, as MPoly
    entries in the highest-weight coordinates; returns (keys, matrix)."""
    rs = RootSystem(rank)
    lam = tuple(MPoly.variable(rs.lam_vars, n) for n in rs.lam_vars)
    keys = pbw_keys(rank, depth)
    u = unit_key(rank)
    mat = []
    for ki in keys:
        row = []
        for kj in keys:
            w = apply_transpose(rank, ki, {kj: 1}, lam)
            c = w.get(u, 0)
            if isinstance(c, int):
                c = MPoly.const(rs.lam_vars, c)
            row.append(c)
        mat.append(row)
    return keys, mat


def shapovalov_det(rank: int, depth: Tuple[int, ...]) -> MPoly:
    _, mat = shapovalov_matrix(rank, depth)
    rs = RootSystem(rank)
    F = linalg.RatFunOps(rs.lam_vars)
    d = linalg.det([[RatFun.from_mpoly(x) for x in row] for row in mat], F)
    return d.as_mpoly()


def kostant_partition_count(rank: int, depth: Tuple[int, ...]) -> int:
    """Number of ways to write the weight as a nonnegative sum of positive
    roots (type A1: trivial; type A2: roots alpha1, alpha2, alpha1+alpha2)."""
    if any(d < 0 for d in depth):
        return 0
    if rank == 1:
        return 1
    n1, n2 = depth
    return min(n1, n2) + 1


def shapovalov_det_formula(rank: int, depth: Tuple[int, ...]) -> MPoly:
    """Product formula for the contravariant determinant at a weight depth:
    prod over positive roots alpha and k >= 1 of
    (<alpha, lambda + rho> - k) ** P(depth - k alpha),
    with P the partition count above, times the same positive integer
    content as the Gram determinant (computed combinatorially is omitted;
    this returns the monic product, suitable for comparison up to a
    constant)."""
    rs = RootSystem(rank)
    out = MPoly.const(rs.lam_vars, 1)
    for alpha in rs.positive_roots():
        k = 1
        while True:
            rem = tuple(d - k * a for d, a in zip(depth, alpha))
            mult = kostant_partition_count(rank, rem)
            if all(d >= 0 for d in rem):
                if mult:
                    out = out * rs.chi(alpha, k) ** mult
                k += 1
            else:
                break
    return out


def singular_vector_exponents(
    rs: RootSystem, w: WeylElem, lam_coords: Sequence
) -> List[Tuple[int, int]]:
    """Exponents for the extremal singular vector construction: for a
    reduced word w = s_{i1} ... s_{il}, the vector
    f_{i1}^{g1} ... f_{il}^{gl} v_lambda with
    g_k = <alpha_{i_k}, s_{i_{k+1}} ... s_{i_l} (lambda + rho)>
    is singular of weight w . lambda.  Raises ValueError if some exponent
    is negative (the construction needs them nonnegative integers)."""
    word = w.word
    group = rs.weyl_group()
    shifted = tuple(c + 1 for c in lam_coords)
    result: List[Tuple[int, int]] = []
    for k, i in enumerate(word):
        tail = word[k + 1 :]
        moved = group.from_word(tail).act(shifted)
        g = moved[i - 1]
        gf = Fraction(g)
        if gf.denominator != 1 or gf < 0:
            raise ValueError(f"singular-vector exponent {g} at position {k} is not a nonnegative integer")
        result.append((i, int(gf)))
    return result


def singular_vector(rs: RootSystem, w: WeylElem, lam_coords: Sequence) -> Vec:
    """PBW coordinates of the singular vector of weight w . lambda in the
    Verma module with the given dominant integral highest weight."""
    word = singular_vector_exponents(rs, w, lam_coords)
    return normal_order(rs.rank, word)


def verma_weight_coords(rs: RootSystem, lam_coords: Sequence, depth: Tuple[int, ...]):
    """Weight coordinates of the depth-(n1, n2) weight space of M_lambda."""
    out = list(lam_coords)
    for j, n in enumerate(depth):
        alpha = tuple(1 if t == j else 0 for t in range(rs.rank))
        coords = rs.root_coords(alpha)
        out = [o - n * c for o, c in zip(out, coords)]
    return tuple(out)
