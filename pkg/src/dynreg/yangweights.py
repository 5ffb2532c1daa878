"""Symmetric weight functions in spectral variables and the regularizing
kernel on a triple tensor product of evaluation modules.

The ambient space for a fixed level ``k`` is the space H'_k of symmetric
polynomials in ``t_1, ..., t_k`` of degree at most two in each variable,
with coefficients that are polynomials in three parameters ``z1, z2, z3``.
Inside it sits the admissible subspace H_k[l] cut out by the string
vanishing conditions of :func:`admissible_check`.  This module provides:

* the weight functions ``w_p`` and dual weight functions ``w'_q`` indexed
  by compositions ``p`` of ``k`` with ``p_i <= l_i``, in the *anchor*
  normalization ``prod_i [l_i!/(l_i-p_i)!] * Sym(...)`` that makes the
  biorthogonality relation ``<w_p, w'_q> = delta_pq * kappa(l, p)`` exact
  (:func:`weight_fn`, :func:`dual_weight_fn`, :func:`kappa`);
* the coordinate map ``phi`` from the tensor product of three highest
  weight gl2-modules ``V_(l1) (x) V_(l2) (x) V_(l3)`` to H_k[l], sending
  the monomial basis vector indexed by ``q`` to ``w'_q``
  (:func:`phi_map`);
* the bilinear pairing on H'_k given by iterated residues of the density
  ``Omega_k`` along the strings ``tau_q = (z_1, z_1-1, ..., z_3-q_3+1)``
  (:func:`residue_pairing`, :func:`omega_residue`), together with a slow
  deformed variant with three extra parameters ``u_i`` summed over all
  compositions (:func:`residue_pairing_deformed`);
* the inverse coordinate map ``I`` and the regularized map
  ``N = X * I`` whose matrix entries are polynomial in ``z``
  (:func:`I_map`, :func:`X_poly`, :func:`N_map`);
* rational R-matrices on pairs of evaluation modules, their scaled
  variants, and the exchange relations tying ``N`` at permuted ``(l, z)``
  to R-matrix multiplication (:func:`r_matrix`, :func:`rtilde_scalar`,
  :func:`r_check_diagram`);
* generating matrices ``T_ij(u)`` of the relevant Hopf algebra action on
  tensor products of evaluation modules (:func:`yangian_T`).

Everything is exact: coefficients are ``fractions.Fraction`` rationals and
all identities are decided by normalized rational function comparison.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .glduality import z_tuples
from .symcore import (
    ExactDivisionError,
    MPoly,
    PoleError,
    RatFun,
    exact_divide,
    mpoly_gcd,
)

Z_VARS: Tuple[str, str, str] = ("z1", "z2", "z3")
U_VARS: Tuple[str, str, str] = ("u1", "u2", "u3")

Composition = Tuple[int, int, int]


class NotPolynomialError(ArithmeticError):
    """A map that must have polynomial matrix entries failed to."""


class RMatrixError(ArithmeticError):
    """The intertwining equations did not determine a unique R-matrix."""


def t_vars(k: int) -> Tuple[str, ...]:
    return tuple(f"t{a}" for a in range(1, k + 1))


def h_vars(k: int) -> Tuple[str, ...]:
    """Variable tuple for level-k symmetric polynomials: t's, then z's."""
    return t_vars(k) + Z_VARS


def compositions(k: int) -> List[Composition]:
    """All compositions of k into three nonnegative parts, lex ascending."""
    return z_tuples((k, k, k), k)


def bounded_compositions(l: Sequence[int], k: int) -> List[Composition]:
    """Compositions q of k with q_i <= l_i, lex ascending."""
    return z_tuples(tuple(l), k)


def kappa(l: Sequence[int], p: Sequence[int]) -> int:
    """Diagonal pairing constant prod_a p_a! * l_a! / (l_a - p_a)!."""
    out = 1
    for la, pa in zip(l, p):
        if pa < 0 or pa > la:
            raise ValueError(f"composition entry {pa} out of range for side {la}")
        out *= factorial(pa) * factorial(la) // factorial(la - pa)
    return out


# ---------------------------------------------------------------------------
# linear forms
#
# A linear form is a dict mapping variable names to Fraction coefficients,
# with the constant term under the key "".  Forms are the working currency
# of string evaluation: every substitution point is a form, every factor of
# the density Omega is a form, and products of forms expand to MPoly only
# at the very end of an accumulation.
# ---------------------------------------------------------------------------


def _lf_norm(f: Dict[str, Fraction]) -> Dict[str, Fraction]:
    return {v: c for v, c in f.items() if c != 0}


def _lf_const(c) -> Dict[str, Fraction]:
    return _lf_norm({"": Fraction(c)})


def _lf_var(v: str) -> Dict[str, Fraction]:
    return {v: Fraction(1)}


def _lf_point(zvar: str, shift) -> Dict[str, Fraction]:
    """The point z - shift as a form."""
    return _lf_norm({zvar: Fraction(1), "": -Fraction(shift)})


def _lf_add(f: Mapping[str, Fraction], g: Mapping[str, Fraction]) -> Dict[str, Fraction]:
    out = dict(f)
    for v, c in g.items():
        out[v] = out.get(v, Fraction(0)) + c
    return _lf_norm(out)


def _lf_sub(f: Mapping[str, Fraction], g: Mapping[str, Fraction]) -> Dict[str, Fraction]:
    out = dict(f)
    for v, c in g.items():
        out[v] = out.get(v, Fraction(0)) - c
    return _lf_norm(out)


def _lf_shift(f: Mapping[str, Fraction], c) -> Dict[str, Fraction]:
    return _lf_add(f, _lf_const(c))


def _lf_scale(f: Mapping[str, Fraction], c: Fraction) -> Dict[str, Fraction]:
    if c == 0:
        return {}
    return {v: x * c for v, x in f.items()}


def _lf_subst(f: Mapping[str, Fraction], var: str, image: Mapping[str, Fraction]) -> Dict[str, Fraction]:
    """Replace var by the form image inside f."""
    if var not in f:
        return dict(f)
    c = f[var]
    out = {v: x for v, x in f.items() if v != var}
    return _lf_add(out, _lf_scale(image, c))


def _var_sort_key(v: str):
    # natural order: t1 < t2 < ... < t10 < z1 < z2 < z3 < u1 ...; const last
    if not v:
        return (9, 0)
    head = v[0]
    rank = {"t": 0, "z": 1, "u": 2}.get(head, 3)
    try:
        num = int(v[1:])
    except ValueError:
        num = 0
    return (rank, num)


def _lf_key(f: Mapping[str, Fraction]) -> Tuple[Tuple, Fraction]:
    """Canonical hashable key of a nonzero form, and the scalar s with
    f == s * canonical."""
    items = sorted(((v, c) for v, c in f.items()), key=lambda t: _var_sort_key(t[0]))
    lead = next((c for v, c in items if v), None)
    if lead is None:  # constant form
        lead = items[0][1]
    key = tuple((v, c / lead) for v, c in items)
    return key, lead


def _lf_to_mpoly(f: Mapping[str, Fraction], vars: Tuple[str, ...]) -> MPoly:
    terms: Dict[Tuple[int, ...], Fraction] = {}
    zero = (0,) * len(vars)
    for v, c in f.items():
        if not v:
            terms[zero] = terms.get(zero, Fraction(0)) + c
        else:
            e = list(zero)
            e[vars.index(v)] = 1
            terms[tuple(e)] = terms.get(tuple(e), Fraction(0)) + c
    return MPoly(vars, terms)


class _FSum:
    """Accumulator for sums of rational terms sharing structured linear-form
    denominators.  Terms are added as (scalar, numerator MPoly, denominator
    factor multiset); the common denominator is maintained factored and a
    single gcd normalization happens in :meth:`result`."""

    def __init__(self, vars: Tuple[str, ...]):
        self.vars = vars
        self.terms: List[Tuple[MPoly, Dict[Tuple, Tuple[MPoly, int]]]] = []

    def add(self, num: MPoly, den: Mapping[Tuple, Tuple[MPoly, int]]) -> None:
        if num.is_zero():
            return
        self.terms.append((num, dict(den)))

    def result(self) -> RatFun:
        if not self.terms:
            return RatFun.const(self.vars, 0)
        common: Dict[Tuple, Tuple[MPoly, int]] = {}
        for _, den in self.terms:
            for key, (form, mult) in den.items():
                if key not in common or common[key][1] < mult:
                    common[key] = (form, mult)
        total = MPoly.zero(self.vars)
        for num, den in self.terms:
            p = num
            for key, (form, mult) in common.items():
                missing = mult - den.get(key, (None, 0))[1]
                for _ in range(missing):
                    p = p * form
            total = total + p
        if total.is_zero():
            return RatFun.const(self.vars, 0)
        # reduce by trial division: the common denominator is a product of
        # irreducible linear forms, so no general gcd is ever needed
        den_poly = MPoly.const(self.vars, 1)
        for form, mult in common.values():
            left = mult
            while left:
                try:
                    total = exact_divide(total, form)
                except ExactDivisionError:
                    break
                left -= 1
            for _ in range(left):
                den_poly = den_poly * form
        return RatFun(total, den_poly, normalized=True)


def _refactor_den(den: MPoly, factors: Mapping[Tuple, Tuple[MPoly, int]]) -> Dict[Tuple, Tuple[MPoly, int]]:
    """Express a reduced denominator as a sub-multiset of known linear
    factors (exact by unique factorization; the known multiset always
    contains the reduced denominator's factors)."""
    out: Dict[Tuple, Tuple[MPoly, int]] = {}
    rest = den
    for key, (form, mult) in factors.items():
        count = 0
        while count < mult and not rest.is_constant():
            try:
                rest = exact_divide(rest, form)
            except ExactDivisionError:
                break
            count += 1
        if count:
            out[key] = (form, count)
    if not rest.is_constant():
        key = ("__rest__", den.dumps())
        out[key] = (rest, 1)
    elif rest.const_value() != 1:
        c = rest.const_value()
        # fold the constant into one factor to keep the product exact
        if out:
            key = next(iter(out))
            form, mult = out[key]
            out[key] = (form * c if mult == 1 else form, mult)
            if mult > 1:
                out[("__const__", str(c))] = (MPoly.const(den.vars, c), 1)
        elif c != 1:
            out[("__const__", str(c))] = (MPoly.const(den.vars, c), 1)
    return out


# ---------------------------------------------------------------------------
# strings and the density residues
# ---------------------------------------------------------------------------


def tau_string(q: Sequence[int], zmap: Tuple[str, str, str] = Z_VARS) -> Tuple[Tuple[str, int], ...]:
    """The string of points (z_1, z_1-1, ..., z_1-q_1+1, z_2, ...) as
    (variable, shift) pairs, ordered to match t_1, ..., t_k."""
    pts: List[Tuple[str, int]] = []
    for zv, qi in zip(zmap, q):
        pts.extend((zv, r) for r in range(qi))
    return tuple(pts)


@lru_cache(maxsize=None)
def _omega_residue_factored(
    l: Composition, q: Composition, zmap: Tuple[str, str, str]
) -> Tuple[MPoly, Tuple[Tuple[Tuple, Tuple[MPoly, int]], ...]]:
    """Iterated residue of the density Omega_k[l;z] along the string tau_q,
    innermost variable first, returned as (numerator, factored denominator).

    Every step is a simple pole: shift-0 points kill only the factor
    (t_a - z_i), and shift-r points (r >= 1) kill only the chain factor
    left behind by the previous point of the same group; (t_a - z_i + l_i)
    would require r = l_i > q_i - 1.  A non-simple step raises PoleError.
    """
    k = sum(q)
    if any(qi > li for qi, li in zip(q, l)):
        raise ValueError(f"string {q} exceeds sides {l}")
    tvs = t_vars(k)
    factors: Dict[Tuple, List] = {}
    scalar = Fraction(1)

    def push(form: Dict[str, Fraction], mult: int) -> None:
        nonlocal scalar
        key, lead = _lf_key(form)
        scalar *= lead**mult
        if key in factors:
            factors[key][1] += mult
            if factors[key][1] == 0:
                del factors[key]
        else:
            factors[key] = [_lf_scale(form, Fraction(1) / lead), mult]

    for a in range(k):
        for b in range(k):
            if a == b:
                continue
            ta, tb = _lf_var(tvs[a]), _lf_var(tvs[b])
            push(_lf_sub(ta, tb), 1)
            push(_lf_shift(_lf_sub(ta, tb), -1), -1)
    for a in range(k):
        ta = _lf_var(tvs[a])
        for zv, li in zip(zmap, l):
            zf = _lf_var(zv)
            push(_lf_shift(_lf_sub(ta, zf), li), -1)
            push(_lf_sub(ta, zf), -1)

    pts = tau_string(q, zmap)
    for a in range(k):
        var = tvs[a]
        point = _lf_point(*pts[a])
        vanishing: List[Tuple[Tuple, Dict[str, Fraction], int]] = []
        order = 0
        for key, (form, mult) in list(factors.items()):
            if var not in form:
                continue
            if not _lf_subst(form, var, point):
                vanishing.append((key, form, mult))
                order += mult
        if order != -1:
            raise PoleError(
                f"string residue at {var} = {pts[a]} has order {-order}, expected simple"
            )
        for key, form, mult in vanishing:
            gamma = form[var]
            scalar *= gamma**mult
            del factors[key]
        remap: Dict[Tuple, List] = {}
        sc = Fraction(1)
        for form, mult in factors.values():
            nf = _lf_subst(form, var, point)
            if not nf:
                raise PoleError(f"factor vanishes identically at {var} = {pts[a]}")
            key, lead = _lf_key(nf)
            sc *= lead**mult
            if key in remap:
                remap[key][1] += mult
                if remap[key][1] == 0:
                    del remap[key]
            else:
                remap[key] = [_lf_scale(nf, Fraction(1) / lead), mult]
        scalar *= sc
        factors = remap

    num = MPoly.const(Z_VARS, scalar)
    den: Dict[Tuple, Tuple[MPoly, int]] = {}
    for key, (form, mult) in factors.items():
        poly = _lf_to_mpoly(form, Z_VARS)
        if mult > 0:
            for _ in range(mult):
                num = num * poly
        else:
            den[key] = (poly, -mult)
    return num, tuple(sorted(den.items()))


def omega_residue(l: Sequence[int], q: Sequence[int], zmap: Tuple[str, str, str] = Z_VARS) -> RatFun:
    """Residue of the density along the string tau_q, as a rational
    function of z1, z2, z3 (the level-0 empty string gives 1)."""
    num, den_items = _omega_residue_factored(tuple(l), tuple(q), tuple(zmap))
    den = MPoly.const(Z_VARS, 1)
    for _, (form, mult) in den_items:
        for _ in range(mult):
            den = den * form
    return RatFun(num, den)


# ---------------------------------------------------------------------------
# weight function values at points
# ---------------------------------------------------------------------------


def _zfactor_forms(
    point: Mapping[str, Fraction],
    group: int,
    l: Composition,
    zmap: Tuple[str, str, str],
    primed: bool,
) -> List[Dict[str, Fraction]]:
    """The z-dependent factors attached to one spectral variable sitting in
    the given group, evaluated at the point."""
    out = []
    for a in range(3):
        if a == group:
            continue
        za = _lf_var(zmap[a])
        if (a < group) == primed:
            out.append(_lf_shift(_lf_sub(point, za), l[a]))
        else:
            out.append(_lf_sub(point, za))
    return out


@lru_cache(maxsize=None)
def _weight_value_factored(
    l: Composition,
    p: Composition,
    pts: Tuple[Tuple[str, int], ...],
    primed: bool,
    zmap: Tuple[str, str, str],
) -> Tuple[MPoly, Tuple[Tuple[Tuple, Tuple[MPoly, int]], ...]]:
    """Value of the anchor (dual) weight function at the given points,
    reduced, with the denominator kept factored."""
    k = len(pts)
    if sum(p) != k:
        raise ValueError(f"composition {p} does not match {k} points")
    forms = [_lf_point(*pt) for pt in pts]
    eps = 1 if primed else -1
    acc = _FSum(Z_VARS)
    indices = list(range(k))
    for i1 in itertools.combinations(indices, p[0]):
        rest = [x for x in indices if x not in i1]
        for i2 in itertools.combinations(rest, p[1]):
            i3 = tuple(x for x in rest if x not in i2)
            groups = (i1, i2, i3)
            num_forms: List[Dict[str, Fraction]] = []
            den: Dict[Tuple, Tuple[MPoly, int]] = {}
            dead = False
            for g, members in enumerate(groups):
                for x in members:
                    for f in _zfactor_forms(forms[x], g, l, zmap, primed):
                        if not f:
                            dead = True
                            break
                        num_forms.append(f)
                    if dead:
                        break
                if dead:
                    break
            if dead:
                continue
            for ga in range(3):
                for gb in range(ga + 1, 3):
                    for x in groups[ga]:
                        for y in groups[gb]:
                            diff = _lf_sub(forms[x], forms[y])
                            nf = _lf_shift(diff, eps)
                            if not nf:
                                dead = True
                                break
                            num_forms.append(nf)
                            if not diff:
                                raise PoleError(
                                    f"coincident cross-group points {pts[x]} and {pts[y]}"
                                )
                            key, lead = _lf_key(diff)
                            canon = _lf_scale(diff, Fraction(1) / lead)
                            poly = _lf_to_mpoly(canon, Z_VARS)
                            if key in den:
                                den[key] = (poly, den[key][1] + 1)
                            else:
                                den[key] = (poly, 1)
                            num_forms.append(_lf_const(Fraction(1) / lead))
                        if dead:
                            break
                    if dead:
                        break
                if dead:
                    break
            if dead:
                continue
            num = MPoly.const(Z_VARS, 1)
            for f in num_forms:
                num = num * _lf_to_mpoly(f, Z_VARS)
            acc.add(num, den)
    raw = acc.result()
    anchor = Fraction(1)
    for la, pa in zip(l, p):
        anchor *= Fraction(factorial(la), factorial(la - pa)) * factorial(pa)
    value = raw * anchor
    all_factors: Dict[Tuple, Tuple[MPoly, int]] = {}
    for _, den in acc.terms:
        for key, (form, mult) in den.items():
            if key not in all_factors or all_factors[key][1] < mult:
                all_factors[key] = (form, mult)
    return value.num, tuple(sorted(_refactor_den(value.den, all_factors).items()))


def weight_value(
    l: Sequence[int],
    p: Sequence[int],
    pts: Sequence[Tuple[str, int]],
    primed: bool = True,
    zmap: Tuple[str, str, str] = Z_VARS,
) -> RatFun:
    """Evaluate the anchor weight function w_p (or dual w'_p) at a tuple of
    points of the shape (z variable, integer shift), exactly in z."""
    num, den_items = _weight_value_factored(
        tuple(l), tuple(p), tuple(pts), primed, tuple(zmap)
    )
    den = MPoly.const(Z_VARS, 1)
    for _, (form, mult) in den_items:
        for _ in range(mult):
            den = den * form
    return RatFun(num, den)


# ---------------------------------------------------------------------------
# symmetric polynomials of bounded degree
# ---------------------------------------------------------------------------


class SymPolyH:
    """A symmetric polynomial in t_1..t_k, degree <= 2 in each t variable,
    with polynomial coefficients in z1, z2, z3.  Membership is validated on
    construction."""

    __slots__ = ("k", "poly")

    def __init__(self, k: int, poly: MPoly, check: bool = True):
        if poly.vars != h_vars(k):
            raise ValueError(f"expected variables {h_vars(k)}, got {poly.vars}")
        if check:
            for a in range(k):
                if poly.degree_in(f"t{a + 1}") > 2:
                    raise ValueError(f"degree in t{a + 1} exceeds 2")
            for a in range(k - 1):
                if _swap_positions(poly, a, a + 1) != poly:
                    raise ValueError(f"not symmetric in t{a + 1}, t{a + 2}")
        self.k = k
        self.poly = poly

    @classmethod
    def zero(cls, k: int) -> "SymPolyH":
        return cls(k, MPoly.zero(h_vars(k)), check=False)

    @classmethod
    def const(cls, k: int, c) -> "SymPolyH":
        return cls(k, MPoly.const(h_vars(k), c), check=False)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SymPolyH)
            and self.k == other.k
            and self.poly == other.poly
        )

    def __hash__(self):
        return hash((self.k, self.poly))

    def __add__(self, other: "SymPolyH") -> "SymPolyH":
        if self.k != other.k:
            raise ValueError("level mismatch")
        return SymPolyH(self.k, self.poly + other.poly, check=False)

    def __sub__(self, other: "SymPolyH") -> "SymPolyH":
        if self.k != other.k:
            raise ValueError("level mismatch")
        return SymPolyH(self.k, self.poly - other.poly, check=False)

    def __mul__(self, c) -> "SymPolyH":
        """Multiplication by a rational constant or a z-polynomial."""
        if isinstance(c, MPoly):
            if c.vars == Z_VARS:
                c = c.lift(h_vars(self.k))
            if any(
                e[i] for e in c.terms for i in range(self.k)
            ):
                raise ValueError("can only scale by z-polynomials")
            return SymPolyH(self.k, self.poly * c, check=False)
        return SymPolyH(self.k, self.poly * Fraction(c), check=False)

    __rmul__ = __mul__

    def __neg__(self) -> "SymPolyH":
        return SymPolyH(self.k, -self.poly, check=False)

    def value_at(self, pts: Sequence[Tuple[str, int]]) -> MPoly:
        """Evaluate at string points (z variable, shift); the result is a
        polynomial in z1, z2, z3."""
        if len(pts) != self.k:
            raise ValueError(f"expected {self.k} points")
        vars = h_vars(self.k)
        images = {v: MPoly.variable(vars, v) for v in Z_VARS}
        for a, pt in enumerate(pts):
            images[f"t{a + 1}"] = _lf_to_mpoly(_lf_point(*pt), vars)
        out = self.poly.subst(images, vars)
        terms = {e[self.k :]: c for e, c in out.terms.items()}
        return MPoly(Z_VARS, terms)

    def __repr__(self):
        return f"SymPolyH(k={self.k}, {self.poly!r})"


def _swap_positions(poly: MPoly, i: int, j: int) -> MPoly:
    terms: Dict[Tuple[int, ...], Fraction] = {}
    for e, c in poly.terms.items():
        ne = list(e)
        ne[i], ne[j] = ne[j], ne[i]
        key = tuple(ne)
        terms[key] = terms.get(key, Fraction(0)) + c
    return MPoly(poly.vars, terms)


@lru_cache(maxsize=None)
def _vandermonde(k: int) -> MPoly:
    vars = h_vars(k)
    out = MPoly.const(vars, 1)
    for a in range(k):
        for b in range(a + 1, k):
            out = out * (
                MPoly.variable(vars, f"t{a + 1}") - MPoly.variable(vars, f"t{b + 1}")
            )
    return out


@lru_cache(maxsize=None)
def _weight_poly(
    l: Composition, p: Composition, primed: bool, zmap: Tuple[str, str, str]
) -> SymPolyH:
    k = sum(p)
    if any(pi > li for pi, li in zip(p, l)):
        raise ValueError(f"composition {p} exceeds sides {l}")
    vars = h_vars(k)
    eps = 1 if primed else -1
    total = MPoly.zero(vars)
    indices = list(range(k))
    for i1 in itertools.combinations(indices, p[0]):
        rest = [x for x in indices if x not in i1]
        for i2 in itertools.combinations(rest, p[1]):
            i3 = tuple(x for x in rest if x not in i2)
            groups = (i1, i2, i3)
            term = MPoly.const(vars, 1)
            sign = 1
            for g, members in enumerate(groups):
                for x in members:
                    tx = _lf_var(f"t{x + 1}")
                    for f in _zfactor_forms(tx, g, l, zmap, primed):
                        term = term * _lf_to_mpoly(f, vars)
                for x, y in itertools.combinations(members, 2):
                    a, b = min(x, y), max(x, y)
                    term = term * (
                        MPoly.variable(vars, f"t{a + 1}")
                        - MPoly.variable(vars, f"t{b + 1}")
                    )
            for ga in range(3):
                for gb in range(ga + 1, 3):
                    for x in groups[ga]:
                        for y in groups[gb]:
                            if x > y:
                                sign = -sign
                            diff = _lf_shift(
                                _lf_sub(_lf_var(f"t{x + 1}"), _lf_var(f"t{y + 1}")), eps
                            )
                            term = term * _lf_to_mpoly(diff, vars)
            total = total + (term if sign > 0 else -term)
    quotient = exact_divide(total, _vandermonde(k))
    anchor = Fraction(1)
    for la, pa in zip(l, p):
        anchor *= Fraction(factorial(la), factorial(la - pa)) * factorial(pa)
    return SymPolyH(k, quotient * anchor)


def weight_fn(
    l: Sequence[int], p: Sequence[int], zmap: Tuple[str, str, str] = Z_VARS
) -> SymPolyH:
    """Anchor weight function w_p[l; z] as an element of H'_k, k = |p|."""
    return _weight_poly(tuple(l), tuple(p), False, tuple(zmap))


def dual_weight_fn(
    l: Sequence[int], q: Sequence[int], zmap: Tuple[str, str, str] = Z_VARS
) -> SymPolyH:
    """Anchor dual weight function w'_q[l; z] (the phi-image of the basis
    vector indexed by q)."""
    return _weight_poly(tuple(l), tuple(q), True, tuple(zmap))


def phi_map(
    l: Sequence[int],
    coords: Mapping[Tuple[int, int, int], Fraction | int],
    zmap: Tuple[str, str, str] = Z_VARS,
) -> SymPolyH:
    """Image of a vector of the triple tensor product under the coordinate
    map: keys are monomial basis indices (j1, j2, j3), all of one level."""
    levels = {sum(key) for key in coords}
    if len(levels) != 1:
        raise ValueError("phi_map needs coordinates of a single level")
    (k,) = levels
    out = SymPolyH.zero(k)
    for key, c in sorted(coords.items()):
        if any(j > li or j < 0 for j, li in zip(key, l)):
            raise ValueError(f"index {key} out of range for sides {l}")
        out = out + dual_weight_fn(l, key, zmap) * Fraction(c)
    return out


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------


def admissible_check(phi: SymPolyH, l: Sequence[int], zmap: Tuple[str, str, str] = Z_VARS) -> bool:
    """Whether phi satisfies the string vanishing conditions: for each i
    with l_i < k, substituting (z_i, z_i - 1, ..., z_i - l_i) for the first
    l_i + 1 variables annihilates phi (by symmetry the choice of variables
    is immaterial)."""
    k = phi.k
    vars = h_vars(k)
    for zv, li in zip(zmap, l):
        if li >= k:
            continue
        images = {v: MPoly.variable(vars, v) for v in vars}
        for a in range(li + 1):
            images[f"t{a + 1}"] = _lf_to_mpoly(_lf_point(zv, a), vars)
        if not phi.poly.subst(images, vars).is_zero():
            return False
    return True


@lru_cache(maxsize=None)
def _msym_basis(k: int) -> List[Tuple[int, ...]]:
    """Sorted exponent multisets (descending) with entries <= 2: a basis of
    symmetrized monomials for H'_k."""
    out = sorted(
        {tuple(sorted(e, reverse=True)) for e in itertools.product((0, 1, 2), repeat=k)},
        reverse=True,
    )
    return out


def msym(k: int, shape: Sequence[int]) -> SymPolyH:
    """Monomial symmetric polynomial: the orbit sum of t^shape."""
    vars = h_vars(k)
    shape = tuple(shape)
    terms: Dict[Tuple[int, ...], Fraction] = {}
    for perm in set(itertools.permutations(shape)):
        e = tuple(perm) + (0, 0, 0)
        terms[e] = Fraction(1)
    return SymPolyH(k, MPoly(vars, terms))


def admissible_basis(
    l: Sequence[int], k: int, zmap: Tuple[str, str, str] = Z_VARS
) -> List[SymPolyH]:
    """A basis over the rational functions of z of the admissible subspace
    H_k[l] inside H'_k, scaled to polynomial content-free elements.  The
    elements need not lie in the polynomial span of the dual weight basis,
    which is what makes them useful pole probes."""
    shapes = _msym_basis(k)
    basis = [msym(k, s) for s in shapes]
    if all(li >= k for li in l):
        return basis
    vars = h_vars(k)
    row_index: Dict[Tuple, int] = {}
    col_entries: List[Dict[int, MPoly]] = []
    for b in basis:
        entries: Dict[int, MPoly] = {}
        for i, (zv, li) in enumerate(zip(zmap, l)):
            if li >= k:
                continue
            images = {v: MPoly.variable(vars, v) for v in vars}
            for a in range(li + 1):
                images[f"t{a + 1}"] = _lf_to_mpoly(_lf_point(zv, a), vars)
            res = b.poly.subst(images, vars)
            for e, c in res.terms.items():
                key = (i, e[:k])
                if key not in row_index:
                    row_index[key] = len(row_index)
                entries.setdefault(row_index[key], MPoly.zero(vars))
                entries[row_index[key]] = entries[row_index[key]] + MPoly(vars, {e: c})
        col_entries.append(entries)
    nrows = len(row_index)
    rows = [[MPoly.zero(Z_VARS) for _ in basis] for _ in range(nrows)]
    for j, entries in enumerate(col_entries):
        for r, p in entries.items():
            rows[r][j] = MPoly(Z_VARS, {e[k:]: c for e, c in p.terms.items()})
    null = linalg.poly_kernel(rows, Z_VARS)
    out: List[SymPolyH] = []
    for vec in null:
        g = MPoly.zero(Z_VARS)
        for n in vec:
            if not n.is_zero():
                g = n.primitive() if g.is_zero() else mpoly_gcd(g, n)
                if g.is_constant():
                    break
        elem = SymPolyH.zero(k)
        for b, n in zip(basis, vec):
            if n.is_zero():
                continue
            coeff = n if g.is_zero() or g.is_constant() else exact_divide(n, g)
            elem = elem + b * coeff
        out.append(elem)
    return out


# ---------------------------------------------------------------------------
# the pairing, the I map, and the N map
# ---------------------------------------------------------------------------


def residue_pairing(
    phi: SymPolyH,
    psi: SymPolyH,
    l: Sequence[int],
    zmap: Tuple[str, str, str] = Z_VARS,
) -> RatFun:
    """Bilinear pairing: the sum over compositions q of k with q_i <= l_i
    of the iterated residue of phi * psi * Omega_k[l; z] along tau_q.
    Since the arguments are polynomial they are simply evaluated along each
    string (all residues of the density itself are simple)."""
    if phi.k != psi.k:
        raise ValueError("level mismatch")
    k = phi.k
    acc = _FSum(Z_VARS)
    for q in bounded_compositions(l, k):
        pts = tau_string(q, zmap)
        a = phi.value_at(pts)
        if a.is_zero():
            continue
        b = psi.value_at(pts)
        if b.is_zero():
            continue
        rnum, rden = _omega_residue_factored(tuple(l), q, tuple(zmap))
        acc.add(a * b * rnum, dict(rden))
    return acc.result()


def _values_on_strings(
    phi: SymPolyH, l: Composition, zmap: Tuple[str, str, str]
) -> Dict[Composition, MPoly]:
    return {
        q: phi.value_at(tau_string(q, zmap)) for q in bounded_compositions(l, phi.k)
    }


def _i_coeffs_from_values(
    values: Mapping[Composition, MPoly] | Mapping[Composition, Tuple[MPoly, Tuple]],
    l: Composition,
    k: int,
    zmap: Tuple[str, str, str],
) -> Dict[Composition, RatFun]:
    """Coefficients of I(phi) on the monomial basis, from the values of phi
    along the strings.  Values may be polynomials or factored pairs."""
    out: Dict[Composition, RatFun] = {}
    qs = bounded_compositions(l, k)
    for p in qs:
        acc = _FSum(Z_VARS)
        for q in qs:
            val = values[q]
            if isinstance(val, MPoly):
                vnum, vden = val, ()
            else:
                vnum, vden = val
            if vnum.is_zero():
                continue
            wnum, wden = _weight_value_factored(l, p, tau_string(q, zmap), False, zmap)
            if wnum.is_zero():
                continue
            rnum, rden = _omega_residue_factored(l, q, zmap)
            den: Dict[Tuple, Tuple[MPoly, int]] = {}
            for source in (vden, wden, rden):
                for key, (form, mult) in dict(source).items():
                    if key in den:
                        den[key] = (form, den[key][1] + mult)
                    else:
                        den[key] = (form, mult)
            acc.add(vnum * wnum * rnum, den)
        out[p] = acc.result() / kappa(l, p)
    return out


def I_map(
    phi: SymPolyH, l: Sequence[int], zmap: Tuple[str, str, str] = Z_VARS
) -> Dict[Composition, RatFun]:
    """Inverse coordinate map: coefficients (on the monomial basis of the
    level-k slice of the triple tensor product) of the unique preimage, as
    rational functions of z.  Composing with phi gives the identity."""
    l = tuple(l)
    return _i_coeffs_from_values(
        _values_on_strings(phi, l, tuple(zmap)), l, phi.k, tuple(zmap)
    )


def X_poly(l: Sequence[int], zmap: Tuple[str, str, str] = Z_VARS) -> MPoly:
    """The polynomial clearing all denominators of the I map:
    prod over pairs i < j of prod_{r=0}^{l_j - 1} (z_i - l_i - z_j + r)."""
    out = MPoly.const(Z_VARS, 1)
    for i in range(3):
        for j in range(i + 1, 3):
            zi = _lf_var(zmap[i])
            zj = _lf_var(zmap[j])
            for r in range(l[j]):
                out = out * _lf_to_mpoly(
                    _lf_shift(_lf_sub(zi, zj), r - l[i]), Z_VARS
                )
    return out


def N_map(
    phi: SymPolyH, l: Sequence[int], zmap: Tuple[str, str, str] = Z_VARS
) -> Dict[Composition, RatFun]:
    """The regularized map N = X * I; every coefficient must come out
    polynomial in z, otherwise NotPolynomialError is raised."""
    x = X_poly(l, zmap)
    out: Dict[Composition, RatFun] = {}
    for p, c in I_map(phi, l, zmap).items():
        v = c * x
        if not v.is_polynomial():
            raise NotPolynomialError(
                f"coefficient of {p} in N is not polynomial: {v!r}"
            )
        out[p] = v
    return out


@lru_cache(maxsize=None)
def gram_matrix(
    l: Composition, k: int, zmap: Tuple[str, str, str] = Z_VARS
) -> Tuple[Tuple[RatFun, ...], ...]:
    """Pairing matrix (<w_p, w'_q>) over compositions of k bounded by l, in
    lex order; the biorthogonality relation says it equals diag(kappa)."""
    l = tuple(l)
    zmap = tuple(zmap)
    qs = bounded_compositions(l, k)
    rows = []
    for p in qs:
        row = []
        for q in qs:
            acc = _FSum(Z_VARS)
            for s in qs:
                pts = tau_string(s, zmap)
                wnum, wden = _weight_value_factored(l, p, pts, False, zmap)
                if wnum.is_zero():
                    continue
                vnum, vden = _weight_value_factored(l, q, pts, True, zmap)
                if vnum.is_zero():
                    continue
                rnum, rden = _omega_residue_factored(l, s, zmap)
                den: Dict[Tuple, Tuple[MPoly, int]] = {}
                for source in (wden, vden, rden):
                    for key, (form, mult) in dict(source).items():
                        if key in den:
                            den[key] = (form, den[key][1] + mult)
                        else:
                            den[key] = (form, mult)
                acc.add(wnum * vnum * rnum, den)
            row.append(acc.result())
        rows.append(tuple(row))
    return tuple(rows)


@lru_cache(maxsize=None)
def N_on_dual_basis(
    l: Composition, k: int, zmap: Tuple[str, str, str] = Z_VARS
) -> Tuple[Tuple[RatFun, ...], ...]:
    """Matrix of N on the dual weight basis: column q holds the monomial
    coefficients of N(w'_q).  Raises NotPolynomialError on failure."""
    l = tuple(l)
    zmap = tuple(zmap)
    qs = bounded_compositions(l, k)
    x = X_poly(l, zmap)
    gram = gram_matrix(l, k, zmap)
    cols = []
    for j, q in enumerate(qs):
        col = []
        for i, p in enumerate(qs):
            v = gram[i][j] * x / kappa(l, p)
            if not v.is_polynomial():
                raise NotPolynomialError(
                    f"coefficient of {p} in N(w'_{q}) is not polynomial"
                )
            col.append(v)
        cols.append(col)
    return tuple(tuple(cols[j][i] for j in range(len(qs))) for i in range(len(qs)))


# ---------------------------------------------------------------------------
# the deformed pairing (slow path) and the general residue engine
# ---------------------------------------------------------------------------


class FactoredRat:
    """Rational function kept as numerator MPoly over a factored linear-form
    denominator; supports iterated residues of any pole order via the
    derivative formula."""

    def __init__(
        self,
        vars: Tuple[str, ...],
        num: MPoly,
        den: Mapping[Tuple, Tuple[Dict[str, Fraction], int]],
    ):
        self.vars = vars
        self.num = num
        self.den: Dict[Tuple, List] = {
            key: [dict(form), mult] for key, (form, mult) in den.items() if mult
        }

    def residue(self, var: str, point: Mapping[str, Fraction]) -> Optional["FactoredRat"]:
        """Residue at var = point; None means the function is regular there
        (zero residue)."""
        vanishing = []
        order = 0
        for key, (form, mult) in self.den.items():
            if var in form and not _lf_subst(form, var, point):
                vanishing.append(key)
                order += mult
        num = self.num
        den = {k: (f, m) for k, (f, m) in self.den.items() if k not in vanishing}
        scalar = Fraction(1)
        for key in vanishing:
            form, mult = self.den[key]
            gamma = form[var]
            scalar *= gamma**mult
        if order == 0:
            return None
        m = order
        # g = num / prod(den); residue = 1/(m-1)! * d^{m-1} g / dvar^{m-1} at point
        work_num = num
        work_den: Dict[Tuple, List] = {k: [dict(f), m2] for k, (f, m2) in den.items()}
        for _ in range(m - 1):
            j_keys = [k for k, (f, _) in work_den.items() if var in f]
            base = work_num.diff(var)
            prod_j = MPoly.const(self.vars, 1)
            for k2 in j_keys:
                prod_j = prod_j * _lf_to_mpoly(work_den[k2][0], self.vars)
            new_num = base * prod_j
            for k2 in j_keys:
                f2, m2 = work_den[k2]
                gamma2 = f2[var]
                partial = MPoly.const(self.vars, m2 * gamma2)
                for k3 in j_keys:
                    if k3 != k2:
                        partial = partial * _lf_to_mpoly(work_den[k3][0], self.vars)
                new_num = new_num - work_num * partial
            for k2 in j_keys:
                work_den[k2][1] += 1
            work_num = new_num
        images = {v: MPoly.variable(self.vars, v) for v in self.vars}
        images[var] = _lf_to_mpoly(point, self.vars)
        out_num = work_num.subst(images, self.vars)
        out_den: Dict[Tuple, Tuple[Dict[str, Fraction], int]] = {}
        extra = Fraction(1, factorial(m - 1)) / scalar
        for f2, m2 in work_den.values():
            nf = _lf_subst(f2, var, point)
            if not nf:
                raise PoleError("unexpected vanishing factor after substitution")
            if len(nf) == 1 and "" in nf:
                extra /= nf[""] ** m2
                continue
            key, lead = _lf_key(nf)
            extra /= lead**m2
            canon = _lf_scale(nf, Fraction(1) / lead)
            if key in out_den:
                out_den[key] = (canon, out_den[key][1] + m2)
            else:
                out_den[key] = (canon, m2)
        return FactoredRat(self.vars, out_num * extra, out_den)

    def to_ratfun(self, out_vars: Tuple[str, ...]) -> RatFun:
        num = self.num
        den = MPoly.const(self.vars, 1)
        for form, mult in self.den.values():
            fp = _lf_to_mpoly(form, self.vars)
            for _ in range(mult):
                den = den * fp
        used = [v for v in self.vars if v not in out_vars]
        for v in used:
            if num.degree_in(v) or den.degree_in(v):
                raise ValueError(f"variable {v} survives into the result")
        pos = [self.vars.index(v) for v in out_vars]
        restrict = lambda p: MPoly(
            out_vars, {tuple(e[i] for i in pos): c for e, c in p.terms.items()}
        )
        return RatFun(restrict(num), restrict(den))


def residue_pairing_deformed(
    phi: SymPolyH, psi: SymPolyH, l: Sequence[int]
) -> RatFun:
    """The deformed pairing with three extra parameters u_i, summed over
    all compositions of k (not only those bounded by l), as a rational
    function of (z1, z2, z3, u1, u2, u3).  Specializing u = l recovers
    :func:`residue_pairing` on admissible arguments.  Slow: intended for
    small levels as a cross-check."""
    if phi.k != psi.k:
        raise ValueError("level mismatch")
    k = phi.k
    vars = t_vars(k) + Z_VARS + U_VARS
    out_vars = Z_VARS + U_VARS
    total = RatFun.const(out_vars, 0)
    prod = (phi.poly * psi.poly).lift(vars)
    for q in compositions(k):
        den: Dict[Tuple, Tuple[Dict[str, Fraction], int]] = {}
        scalar = Fraction(1)
        num = prod
        for a in range(k):
            for b in range(k):
                if a == b:
                    continue
                diff = _lf_sub(_lf_var(f"t{a + 1}"), _lf_var(f"t{b + 1}"))
                num = num * _lf_to_mpoly(diff, vars)
                f = _lf_shift(diff, -1)
                key, lead = _lf_key(f)
                scalar /= lead
                canon = _lf_scale(f, Fraction(1) / lead)
                den[key] = (canon, den.get(key, (None, 0))[1] + 1)
        for a in range(k):
            ta = _lf_var(f"t{a + 1}")
            for zv, uv in zip(Z_VARS, U_VARS):
                for f in (
                    _lf_add(_lf_sub(ta, _lf_var(zv)), _lf_var(uv)),
                    _lf_sub(ta, _lf_var(zv)),
                ):
                    key, lead = _lf_key(f)
                    scalar /= lead
                    canon = _lf_scale(f, Fraction(1) / lead)
                    den[key] = (canon, den.get(key, (None, 0))[1] + 1)
        fr = FactoredRat(vars, num * scalar, den)
        pts = tau_string(q)
        dead = False
        for a in range(k):
            res = fr.residue(f"t{a + 1}", _lf_point(*pts[a]))
            if res is None:
                dead = True
                break
            fr = res
        if dead:
            continue
        total = total + fr.to_ratfun(out_vars)
    return total


# ---------------------------------------------------------------------------
# tensor products of evaluation modules
# ---------------------------------------------------------------------------


def box_keys(l: Sequence[int]) -> List[Tuple[int, ...]]:
    """Monomial basis indices of the tensor product, lex order."""
    return [
        key
        for key in itertools.product(*(range(li + 1) for li in l))
    ]


def box_slice(l: Sequence[int], k: int) -> List[Tuple[int, ...]]:
    return [key for key in box_keys(l) if sum(key) == k]


def _leg_entry(gen: str, l: int, i: int, j: int) -> Fraction:
    """Matrix entry <v_i | gen | v_j> on the single highest weight module
    with basis v_0..v_l, where the lowering operator sends v_j to v_{j+1}."""
    if gen == "e21":
        return Fraction(1) if i == j + 1 else Fraction(0)
    if gen == "e12":
        return Fraction(j * (l - j + 1)) if i == j - 1 else Fraction(0)
    if gen == "e11":
        return Fraction(l - j) if i == j else Fraction(0)
    if gen == "e22":
        return Fraction(j) if i == j else Fraction(0)
    raise ValueError(f"unknown generator {gen}")


def gl2_box_matrix(l: Sequence[int], gen: str) -> List[List[Fraction]]:
    """Matrix of the coproduct action of one gl2 generator on the tensor
    product, in the lex monomial basis."""
    keys = box_keys(l)
    index = {key: i for i, key in enumerate(keys)}
    n = len(keys)
    out = [[Fraction(0)] * n for _ in range(n)]
    for col, key in enumerate(keys):
        for leg in range(len(l)):
            for i in range(l[leg] + 1):
                c = _leg_entry(gen, l[leg], i, key[leg])
                if c == 0:
                    continue
                nk = list(key)
                nk[leg] = i
                out[index[tuple(nk)]][col] += c
    return out


def highest_weight_vectors(l: Sequence[int], k: int) -> List[List[Fraction]]:
    """Basis of the kernel of the raising generator on the level-k slice of
    the tensor product (coordinates in the lex slice basis)."""
    keys = box_keys(l)
    slice_keys = box_slice(l, k)
    up = gl2_box_matrix(l, "e12")
    index = {key: i for i, key in enumerate(keys)}
    target = box_slice(l, k - 1) if k else []
    rows = []
    for tk in target:
        rows.append([up[index[tk]][index[sk]] for sk in slice_keys])
    F = linalg.FractionOps
    if not rows:
        return [
            [F.one if i == j else F.zero for i in range(len(slice_keys))]
            for j in range(len(slice_keys))
        ]
    return linalg.kernel(rows, F)


# ---------------------------------------------------------------------------
# generating matrices on tensor products of evaluation modules
# ---------------------------------------------------------------------------


def yangian_T(
    l: Sequence[int],
    zs: Sequence[str],
    i: int,
    j: int,
    uvar: str = "u",
    vars: Optional[Tuple[str, ...]] = None,
) -> List[List[RatFun]]:
    """Matrix of the generating series entry T_ij(u) on the tensor product
    of evaluation modules with evaluation points given by the z variable
    names zs, in the lex monomial basis.  The one-leg entries are
    delta_ij + E_ji / (u - z); multiple legs compose by the coproduct,
    i.e. as the 2x2 matrix product of the leg matrices, rightmost leg
    first."""
    if vars is None:
        vars = (uvar,) + tuple(dict.fromkeys(zs))
    F = linalg.RatFunOps(vars)
    legs = len(l)

    def leg_block(leg: int, a: int, b: int) -> List[List[RatFun]]:
        n = l[leg] + 1
        u = RatFun.variable(vars, uvar)
        z = RatFun.variable(vars, zs[leg])
        out = [[F.zero for _ in range(n)] for _ in range(n)]
        for r in range(n):
            for c in range(n):
                val = F.zero
                if a == b and r == c:
                    val = val + F.one
                e = _leg_entry(f"e{b}{a}", l[leg], r, c)
                if e != 0:
                    val = val + RatFun.const(vars, e) / (u - z)
                out[r][c] = val
        return out

    # 2x2 matrix with operator entries, built leftmost leg innermost
    current: Dict[Tuple[int, int], List[List[RatFun]]] = {
        (a, b): leg_block(0, a, b) for a in (1, 2) for b in (1, 2)
    }
    for leg in range(1, legs):
        nxt: Dict[Tuple[int, int], List[List[RatFun]]] = {}
        for a in (1, 2):
            for b in (1, 2):
                acc = None
                for c in (1, 2):
                    blk = _kron(current[(c, b)], leg_block(leg, a, c), F)
                    if acc is None:
                        acc = blk
                    else:
                        acc = [
                            [x + y for x, y in zip(ra, rb)]
                            for ra, rb in zip(acc, blk)
                        ]
                nxt[(a, b)] = acc
        current = nxt
    return current[(i, j)]


def _kron(A: List[List[RatFun]], B: List[List[RatFun]], F) -> List[List[RatFun]]:
    """Kronecker product with A indexing the earlier (major) tensor leg."""
    na, nb = len(A), len(B)
    ma, mb = len(A[0]), len(B[0])
    out = [[F.zero for _ in range(ma * mb)] for _ in range(na * nb)]
    for i in range(na):
        for j in range(ma):
            if F.is_zero(A[i][j]):
                continue
            for r in range(nb):
                for c in range(mb):
                    if F.is_zero(B[r][c]):
                        continue
                    out[i * nb + r][j * mb + c] = F.mul(A[i][j], B[r][c])
    return out


# ---------------------------------------------------------------------------
# R-matrices
# ---------------------------------------------------------------------------

U_VAR: Tuple[str] = ("u",)


class RMatrix:
    """The exchange operator on a pair of evaluation modules: block scalars
    rho_s on each irreducible summand, the full matrix of the flip-composed
    operator (from the pair basis of (l, l') to that of (l', l)), and the
    spectral variable name."""

    __slots__ = ("l", "lp", "rho", "matrix", "vars")

    def __init__(self, l: int, lp: int, rho: List[RatFun], matrix: List[List[RatFun]]):
        self.l = l
        self.lp = lp
        self.rho = rho
        self.matrix = matrix
        self.vars = U_VAR

    def at(self, u: RatFun, vars: Tuple[str, ...]) -> List[List[RatFun]]:
        """The matrix with the spectral parameter substituted by a rational
        function of other variables."""
        return [[_ratfun_sub_u(x, u, vars) for x in row] for row in self.matrix]


def _ratfun_sub_u(f: RatFun, g: RatFun, vars: Tuple[str, ...]) -> RatFun:
    def horner(p: MPoly) -> RatFun:
        # p is univariate in "u"
        coefs: Dict[int, Fraction] = {}
        for e, c in p.terms.items():
            coefs[e[0]] = c
        out = RatFun.const(vars, 0)
        for d in range(max(coefs, default=0), -1, -1):
            out = out * g + RatFun.const(vars, coefs.get(d, Fraction(0)))
        return out
    den = horner(f.den)
    if den.is_zero():
        raise PoleError("denominator vanishes identically under substitution")
    return horner(f.num) / den


@lru_cache(maxsize=None)
def r_matrix(l: int, lp: int) -> RMatrix:
    """The exchange operator, normalized to act as the identity on the
    product of the two highest vectors.  It is determined uniquely by
    intertwining the degree-one generating matrices at spectral points
    (u, 0); non-uniqueness or inconsistency raises RMatrixError."""
    F = linalg.FractionOps
    FU = linalg.RatFunOps(U_VAR)
    src, tgt = (l, lp), (lp, l)
    smin = min(l, lp)

    def orbit_basis(pair: Tuple[int, int]) -> List[List[Fraction]]:
        dim = (pair[0] + 1) * (pair[1] + 1)
        down = gl2_box_matrix(pair, "e21")
        keys = box_keys(pair)
        index = {key: i for i, key in enumerate(keys)}
        cols: List[List[Fraction]] = []
        for s in range(smin + 1):
            hws = highest_weight_vectors(pair, s)
            if len(hws) != 1:
                raise RMatrixError(
                    f"expected one highest vector at level {s} of {pair}, got {len(hws)}"
                )
            slice_keys = box_slice(pair, s)
            vec = [Fraction(0)] * dim
            for c, key in zip(hws[0], slice_keys):
                vec[index[key]] = c
            for _ in range(pair[0] + pair[1] - 2 * s + 1):
                cols.append(vec)
                vec = linalg.mat_vec(down, vec, F)
        if len(cols) != dim:
            raise RMatrixError("isotypic basis does not span the pair module")
        return linalg.transpose(cols)

    B_src = orbit_basis(src)
    B_tgt = orbit_basis(tgt)
    B_src_inv = linalg.inv(B_src, F)
    dim = len(B_src)
    transporters: List[List[List[Fraction]]] = []
    offset = 0
    for s in range(smin + 1):
        width = l + lp - 2 * s + 1
        sel = [
            [
                Fraction(1) if (i == j and offset <= i < offset + width) else Fraction(0)
                for j in range(dim)
            ]
            for i in range(dim)
        ]
        transporters.append(
            linalg.mat_mul(linalg.mat_mul(B_tgt, sel, F), B_src_inv, F)
        )
        offset += width

    def c_ops(pair: Tuple[int, int], znames: Tuple[Fraction, Fraction]):
        out = {}
        for a in (1, 2):
            for b in (1, 2):
                e1 = gl2_box_matrix((pair[0],), f"e{b}{a}")
                e2 = gl2_box_matrix((pair[1],), f"e{b}{a}")
                id1 = linalg.identity(pair[0] + 1, F)
                id2 = linalg.identity(pair[1] + 1, F)
                m = [
                    [FU.zero for _ in range((pair[0] + 1) * (pair[1] + 1))]
                    for _ in range((pair[0] + 1) * (pair[1] + 1))
                ]

                def addf(mat, coeff: RatFun):
                    for i2 in range(len(mat)):
                        for j2 in range(len(mat)):
                            if mat[i2][j2] != 0:
                                m[i2][j2] = m[i2][j2] + coeff * Fraction(mat[i2][j2])

                addf(_kron_fr(e1, id2), znames[0])
                addf(_kron_fr(id1, e2), znames[1])
                for c in (1, 2):
                    ebc = gl2_box_matrix((pair[0],), f"e{b}{c}")
                    eca = gl2_box_matrix((pair[1],), f"e{c}{a}")
                    addf(_kron_fr(ebc, eca), FU.one)
                out[(a, b)] = m
        return out

    u = RatFun.variable(U_VAR, "u")
    zero = RatFun.const(U_VAR, 0)
    C_src = c_ops(src, (u, zero))
    C_tgt = c_ops(tgt, (zero, u))

    T_fr = [
        [[RatFun.const(U_VAR, x) for x in row] for row in T] for T in transporters
    ]
    rows: List[List[RatFun]] = []
    for (a, b) in ((1, 1), (1, 2), (2, 1), (2, 2)):
        lhs = [linalg.mat_mul(T, C_src[(a, b)], FU) for T in T_fr]
        rhs = [linalg.mat_mul(C_tgt[(a, b)], T, FU) for T in T_fr]
        for i in range(dim):
            for j in range(dim):
                row = [
                    lhs[s][i][j] - rhs[s][i][j] for s in range(smin + 1)
                ]
                if any(not x.is_zero() for x in row):
                    rows.append(row)
    null = linalg.kernel(rows, FU) if rows else linalg.identity(smin + 1, FU)
    if len(null) != 1:
        raise RMatrixError(
            f"intertwining system for ({l}, {lp}) has kernel of dimension {len(null)}"
        )
    vec = null[0]
    if vec[0].is_zero():
        raise RMatrixError("exchange operator vanishes on the top summand")
    rho = [x / vec[0] for x in vec]
    matrix = [[RatFun.const(U_VAR, 0) for _ in range(dim)] for _ in range(dim)]
    for s in range(smin + 1):
        for i in range(dim):
            for j in range(dim):
                if transporters[s][i][j] != 0:
                    matrix[i][j] = matrix[i][j] + rho[s] * transporters[s][i][j]
    return RMatrix(l, lp, rho, matrix)


def _kron_fr(A: List[List[Fraction]], B: List[List[Fraction]]) -> List[List[Fraction]]:
    F = linalg.FractionOps
    na, nb = len(A), len(B)
    out = [[Fraction(0)] * (na * nb) for _ in range(na * nb)]
    for i in range(na):
        for j in range(na):
            if A[i][j] == 0:
                continue
            for r in range(nb):
                for c in range(nb):
                    if B[r][c] == 0:
                        continue
                    out[i * nb + r][j * nb + c] = A[i][j] * B[r][c]
    return out


def rtilde_scalar(l: int, lp: int, vars: Tuple[str, ...] = U_VAR, uname: str = "u") -> RatFun:
    """Scalar relating the scaled exchange operator to the standard one:
    prod_{r=0}^{l-1}(-u - lp + r) / prod_{r=0}^{lp-1}(u - l + r).  The
    scaled operators satisfy the same exchange relations with scalar
    product one for opposite arguments."""
    u = MPoly.variable(vars, uname)
    num = MPoly.const(vars, 1)
    den = MPoly.const(vars, 1)
    for r in range(l):
        num = num * (-u + (r - lp))
    for r in range(lp):
        den = den * (u + (r - l))
    return RatFun(num, den)


# ---------------------------------------------------------------------------
# exchange diagrams
# ---------------------------------------------------------------------------

_S_PERMS = {1: (1, 0, 2), 2: (0, 2, 1)}


def _perm_l(l: Composition, s: int) -> Composition:
    perm = _S_PERMS[s]
    return tuple(l[i] for i in perm)


def _perm_zmap(zmap: Tuple[str, str, str], s: int) -> Tuple[str, str, str]:
    perm = _S_PERMS[s]
    return tuple(zmap[i] for i in perm)


def _rename_ratfun(f: RatFun, zmap: Tuple[str, str, str]) -> RatFun:
    if tuple(zmap) == Z_VARS:
        return f
    images = {zv: MPoly.variable(Z_VARS, tv) for zv, tv in zip(Z_VARS, zmap)}
    return f.subst(images, Z_VARS)


def _scaled_exchange_on_triple(
    l: Composition, s: int, zmap: Tuple[str, str, str]
) -> List[List[RatFun]]:
    """Matrix of the scaled exchange operator acting on the adjacent pair
    (s = 1: legs 1,2 at z1 - z2; s = 2: legs 2,3 at z2 - z3) tensored with
    the identity on the remaining leg, from the basis of the original
    triple to that of the permuted triple."""
    F = linalg.RatFunOps(Z_VARS)
    if s == 1:
        a, b, fixed = l[0], l[1], l[2]
        u = RatFun.variable(Z_VARS, zmap[0]) - RatFun.variable(Z_VARS, zmap[1])
    else:
        a, b, fixed = l[1], l[2], l[0]
        u = RatFun.variable(Z_VARS, zmap[1]) - RatFun.variable(Z_VARS, zmap[2])
    rm = r_matrix(a, b)
    scale = _ratfun_sub_u(rtilde_scalar(a, b), u, Z_VARS)
    pair = [[x * scale for x in row] for row in rm.at(u, Z_VARS)]
    ident = [
        [F.one if i == j else F.zero for j in range(fixed + 1)]
        for i in range(fixed + 1)
    ]
    if s == 1:
        return _kron(pair, ident, F)
    return _kron(ident, pair, F)


def r_check_diagram(
    l: Sequence[int], k: int, s: int, zmap: Tuple[str, str, str] = Z_VARS
) -> bool:
    """Verify the exchange relation at level k for the adjacent
    transposition s: the map N at the permuted data equals the scaled
    exchange operator composed with N at the original data, on the dual
    weight basis, as an identity of rational functions of z."""
    l = tuple(l)
    zmap = tuple(zmap)
    lperm = _perm_l(l, s)
    zperm = _perm_zmap(zmap, s)
    src_keys = box_slice(l, k)
    tgt_keys = box_slice(lperm, k)
    qs = bounded_compositions(l, k)
    n_base = N_on_dual_basis(l, k, zmap)
    exch_full = _scaled_exchange_on_triple(l, s, zmap)
    full_src = box_keys(l)
    full_tgt = box_keys(lperm)
    src_pos = [full_src.index(key) for key in src_keys]
    tgt_pos = [full_tgt.index(key) for key in tgt_keys]
    exch = [[exch_full[i][j] for j in src_pos] for i in tgt_pos]
    zero = RatFun.const(Z_VARS, 0)
    for jq, q in enumerate(qs):
        # column of N on the source slice basis; skip structural zeros to
        # avoid a dense matrix-vector product over rational functions
        col = [zero] * len(src_keys)
        for ip, p in enumerate(qs):
            col[src_keys.index(p)] = n_base[ip][jq]
        rhs = []
        for row in exch:
            acc = zero
            for c, x in zip(row, col):
                if not (x.is_zero() or c.is_zero()):
                    acc = acc + c * x
            rhs.append(acc)
        vals = {
            pp: _weight_value_factored(l, q, tau_string(pp, zperm), True, zmap)
            for pp in bounded_compositions(lperm, k)
        }
        coeffs = _i_coeffs_from_values(
            {pp: (num, dict(den)) for pp, (num, den) in vals.items()},
            lperm,
            k,
            zperm,
        )
        x = X_poly(lperm, zperm)
        lhs = [RatFun.const(Z_VARS, 0)] * len(tgt_keys)
        for pp, c in coeffs.items():
            lhs[tgt_keys.index(pp)] = c * x
        for a, b in zip(lhs, rhs):
            if a != b:
                return False
    return True


def phi_check_diagram(
    l: Sequence[int], k: int, s: int, zmap: Tuple[str, str, str] = Z_VARS
) -> bool:
    """Verify that the coordinate map at permuted data composed with the
    standard (unscaled) exchange operator equals the coordinate map at the
    original data, on the level-k slice basis."""
    l = tuple(l)
    zmap = tuple(zmap)
    lperm = _perm_l(l, s)
    zperm = _perm_zmap(zmap, s)
    if s == 1:
        a, b, fixed = l[0], l[1], l[2]
        u = RatFun.variable(Z_VARS, zmap[0]) - RatFun.variable(Z_VARS, zmap[1])
    else:
        a, b, fixed = l[1], l[2], l[0]
        u = RatFun.variable(Z_VARS, zmap[1]) - RatFun.variable(Z_VARS, zmap[2])
    F = linalg.RatFunOps(Z_VARS)
    rm = r_matrix(a, b)
    pair = rm.at(u, Z_VARS)
    ident = [
        [F.one if i == j else F.zero for j in range(fixed + 1)]
        for i in range(fixed + 1)
    ]
    exch_full = _kron(pair, ident, F) if s == 1 else _kron(ident, pair, F)
    full_src = box_keys(l)
    full_tgt = box_keys(lperm)
    src_keys = box_slice(l, k)
    tgt_keys = box_slice(lperm, k)
    strings = [tau_string(pp, zperm) for pp in bounded_compositions(lperm, k)]
    for key in src_keys:
        jcol = full_src.index(key)
        image = [exch_full[i][jcol] for i in range(len(full_tgt))]
        for pts in strings:
            lhs = RatFun.const(Z_VARS, 0)
            for fk, c in zip(full_tgt, image):
                if c.is_zero():
                    continue
                lhs = lhs + c * weight_value(lperm, fk, pts, primed=True, zmap=zperm)
            rhs = weight_value(l, key, pts, primed=True, zmap=zmap)
            if lhs != rhs:
                return False
    return True


# ---------------------------------------------------------------------------
# the functional action on H'
# ---------------------------------------------------------------------------


def act_e11(phi: SymPolyH, l: Sequence[int]) -> SymPolyH:
    return phi * Fraction(sum(l) - phi.k)


def act_e22(phi: SymPolyH, l: Sequence[int]) -> SymPolyH:
    return phi * Fraction(phi.k)


def act_e12(phi: SymPolyH) -> SymPolyH:
    """Lower the level: the coefficient of the top power of the last
    variable (degree exactly two), reindexed to k - 1 variables."""
    k = phi.k
    if k == 0:
        raise ValueError("cannot lower level 0")
    vars = h_vars(k)
    out_vars = h_vars(k - 1)
    terms: Dict[Tuple[int, ...], Fraction] = {}
    for e, c in phi.poly.terms.items():
        if e[k - 1] != 2:
            continue
        ne = e[: k - 1] + e[k:]
        terms[ne] = terms.get(ne, Fraction(0)) + c
    return SymPolyH(k - 1, MPoly(out_vars, terms))


def act_e21(phi: SymPolyH, l: Sequence[int], zmap: Tuple[str, str, str] = Z_VARS) -> SymPolyH:
    """Raise the level: the symmetrized interpolation operator sending
    H'_k to H'_{k+1}."""
    k = phi.k
    kk = k + 1
    vars = h_vars(kk)
    total = MPoly.zero(vars)
    for c in range(1, kk + 1):
        others = [a for a in range(1, kk + 1) if a != c]
        images = {zv: MPoly.variable(vars, zv) for zv in Z_VARS}
        for pos, a in enumerate(others):
            images[f"t{pos + 1}"] = MPoly.variable(vars, f"t{a}")
        phic = phi.poly.subst(images, vars)
        tc = MPoly.variable(vars, f"t{c}")
        plus = MPoly.const(vars, 1)
        minus = MPoly.const(vars, 1)
        for zv, li in zip(zmap, l):
            z = MPoly.variable(vars, zv)
            plus = plus * (tc - z + li)
            minus = minus * (tc - z)
        for a in others:
            ta = MPoly.variable(vars, f"t{a}")
            plus = plus * (tc - ta - 1)
            minus = minus * (tc - ta + 1)
        nc = phic * (plus - minus)
        vand = MPoly.const(vars, 1)
        for x, y in itertools.combinations(others, 2):
            vand = vand * (
                MPoly.variable(vars, f"t{x}") - MPoly.variable(vars, f"t{y}")
            )
        sign = 1 if (c - 1) % 2 == 0 else -1
        total = total + (nc * vand if sign > 0 else -(nc * vand))
    quotient = exact_divide(total, _vandermonde(kk))
    return SymPolyH(kk, quotient)
