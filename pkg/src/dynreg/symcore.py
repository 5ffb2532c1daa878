"""Sparse multivariate polynomials and rational functions with exact
rational coefficients.

A polynomial is stored as a dict mapping exponent tuples to nonzero
`fractions.Fraction` coefficients, together with a fixed tuple of variable
names.  The canonical term order everywhere is graded lexicographic
(grlex): sort by total degree, then lexicographically on the exponent
tuple, largest first.  Rational functions are kept normalized: numerator
and denominator coprime, denominator monic with respect to grlex.

Serialization is byte-stable: terms are emitted in grlex order with
numerator/denominator strings, so equal objects serialize identically.
"""

from __future__ import annotations

import heapq
import json
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

Exponent = Tuple[int, ...]


class PoleError(ZeroDivisionError):
    """Evaluation of a rational function at a zero of its denominator."""


class ExactDivisionError(ArithmeticError):
    """Requested exact polynomial division has a nonzero remainder."""


def _fr(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def grlex_key(exp: Exponent):
    return (sum(exp), exp)


class MPoly:
    """Sparse multivariate polynomial over Q with a fixed variable tuple."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Tuple[str, ...], terms: Dict[Exponent, Fraction]):
        self.vars = tuple(vars)
        self.terms = {e: c for e, c in terms.items() if c != 0}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, vars: Tuple[str, ...]) -> "MPoly":
        return cls(vars, {})

    @classmethod
    def const(cls, vars: Tuple[str, ...], c) -> "MPoly":
        c = _fr(c)
        if c == 0:
            return cls.zero(vars)
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def variable(cls, vars: Tuple[str, ...], name: str) -> "MPoly":
        i = tuple(vars).index(name)
        e = [0] * len(vars)
        e[i] = 1
        return cls(vars, {tuple(e): Fraction(1)})

    # -- basic predicates --------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(x == 0 for x in e) for e in self.terms)

    def const_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=0)

    def leading_term(self) -> Tuple[Exponent, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "MPoly"):
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(self.vars, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, Fraction(0)) + c
            if s == 0:
                t.pop(e, None)
            else:
                t[e] = s
        return MPoly(self.vars, t)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(self.vars, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _fr(other)
            if c == 0:
                return MPoly.zero(self.vars)
            return MPoly(self.vars, {e: cc * c for e, cc in self.terms.items()})
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check(other)
        t: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    t.pop(e, None)
                else:
                    t[e] = s
        return MPoly(self.vars, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(self.vars, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- substitution and evaluation ---------------------------------------

    def evaluate(self, binding: Mapping[str, Fraction]) -> Fraction:
        """Evaluate at a full point.  Every variable must be bound."""
        missing = [v for v in self.vars if v not in binding]
        if missing:
            raise ValueError(f"unbound variables in evaluate: {missing}")
        total = Fraction(0)
        vals = [_fr(binding[v]) for v in self.vars]
        for e, c in self.terms.items():
            m = c
            for x, p in zip(vals, e):
                if p:
                    m *= x ** p
            total += m
        return total

    def specialize(self, binding: Mapping[str, Fraction]) -> "MPoly":
        """Substitute values for a subset of the variables."""
        idx = {self.vars.index(v): _fr(x) for v, x in binding.items() if v in self.vars}
        t: Dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            m = c
            ne = list(e)
            for i, x in idx.items():
                if e[i]:
                    m *= x ** e[i]
                ne[i] = 0
            if m == 0:
                continue
            key = tuple(ne)
            s = t.get(key, Fraction(0)) + m
            if s == 0:
                t.pop(key, None)
            else:
                t[key] = s
        return MPoly(self.vars, t)

    def subst(self, images: Mapping[str, "MPoly"], out_vars: Tuple[str, ...]) -> "MPoly":
        """Full substitution: every variable maps to a polynomial in out_vars."""
        result = MPoly.zero(out_vars)
        imgs = []
        for v in self.vars:
            if v not in images:
                raise ValueError(f"no image for variable {v}")
            img = images[v]
            if img.vars != tuple(out_vars):
                raise ValueError("substitution image in wrong variables")
            imgs.append(img)
        pows: Dict[Tuple[int, int], MPoly] = {}

        def power(i: int, p: int) -> MPoly:
            key = (i, p)
            if key not in pows:
                pows[key] = imgs[i] ** p
            return pows[key]

        for e, c in self.terms.items():
            m = MPoly.const(out_vars, c)
            for i, p in enumerate(e):
                if p:
                    m = m * power(i, p)
            result = result + m
        return result

    def rename(self, new_vars: Tuple[str, ...]) -> "MPoly":
        if len(new_vars) != len(self.vars):
            raise ValueError("rename must preserve arity")
        return MPoly(tuple(new_vars), dict(self.terms))

    def lift(self, big_vars: Tuple[str, ...]) -> "MPoly":
        """Reinterpret in a larger variable tuple (superset, any order)."""
        pos = [tuple(big_vars).index(v) for v in self.vars]
        t: Dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            ne = [0] * len(big_vars)
            for p, x in zip(pos, e):
                ne[p] = x
            t[tuple(ne)] = c
        return MPoly(tuple(big_vars), t)

    def diff(self, name: str) -> "MPoly":
        i = self.vars.index(name)
        t: Dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            t[tuple(ne)] = c * e[i]
        return MPoly(self.vars, t)

    # -- content and gcd ---------------------------------------------------

    def content(self) -> Fraction:
        """Positive rational c with self/c having coprime integer coefficients,
        signed so that self/content() has positive leading coefficient."""
        if not self.terms:
            return Fraction(1)
        from math import gcd, lcm

        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        cont = Fraction(num, den)
        _, lead = self.leading_term()
        if lead < 0:
            cont = -cont
        return cont

    def primitive(self) -> "MPoly":
        c = self.content()
        if c == 1:
            return self
        return self * (Fraction(1) / c)

    # -- printing / serialization ------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = [str(c)] if (c != 1 or not any(e)) else []
            for v, p in zip(self.vars, e):
                if p == 1:
                    factors.append(v)
                elif p > 1:
                    factors.append(f"{v}^{p}")
            parts.append("*".join(factors) if factors else str(c))
        return " + ".join(parts).replace("+ -", "- ")

    def latex(self, var_map: Mapping[str, str] | None = None) -> str:
        if not self.terms:
            return "0"
        vm = var_map or {}
        chunks = []
        for e, c in self.sorted_terms():
            body = ""
            for v, p in zip(self.vars, e):
                name = vm.get(v, v)
                if p == 1:
                    body += name + " "
                elif p > 1:
                    body += f"{name}^{{{p}}} "
            body = body.strip()
            if c == 1 and body:
                coeff = ""
            elif c == -1 and body:
                coeff = "-"
            else:
                coeff = (
                    str(c.numerator)
                    if c.denominator == 1
                    else rf"\tfrac{{{c.numerator}}}{{{c.denominator}}}"
                )
            term = coeff + (" " if coeff not in ("", "-") and body else "") + body
            chunks.append(term if term else "1")
        out = chunks[0]
        for t in chunks[1:]:
            out += " - " + t[1:].strip() if t.startswith("-") else " + " + t
        return out

    def to_json_obj(self):
        return {
            "vars": list(self.vars),
            "terms": [
                {"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)}
                for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json_obj(cls, obj) -> "MPoly":
        vars = tuple(obj["vars"])
        terms = {
            tuple(int(x) for x in t["exp"]): Fraction(int(t["num"]), int(t["den"]))
            for t in obj["terms"]
        }
        return cls(vars, terms)

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))


def ring(*names: str) -> Tuple[MPoly, ...]:
    """Convenience: generators of Q[names]."""
    vars = tuple(names)
    return tuple(MPoly.variable(vars, n) for n in names)


# -- division and gcd ------------------------------------------------------


def exact_divide(f: MPoly, g: MPoly) -> MPoly:
    """Return q with f == q * g, raising ExactDivisionError otherwise.

    Heap-ordered long division: the working remainder is a mutable dict
    and the next leading exponent comes from a max-heap, so each step
    costs O(#terms(g) log) instead of a full remainder rebuild."""
    if g.is_zero():
        raise ZeroDivisionError("exact division by zero polynomial")
    if f.is_zero():
        return MPoly.zero(f.vars)
    f._check(g)
    ge, gc = g.leading_term()
    if g.is_constant():
        return f * (Fraction(1) / gc)
    gtail = [(e, c) for e, c in g.terms.items() if e != ge]
    q: Dict[Exponent, Fraction] = {}
    r = dict(f.terms)

    def enc(e: Exponent):
        return (-sum(e), tuple(-x for x in e))

    heap = [enc(e) for e in r]
    heapq.heapify(heap)
    while heap:
        key = heapq.heappop(heap)
        e = tuple(-x for x in key[1])
        c = r.pop(e, None)
        if c is None:
            continue  # stale heap entry
        qe = tuple(a - b for a, b in zip(e, ge))
        if any(x < 0 for x in qe):
            raise ExactDivisionError(f"{f!r} is not divisible by {g!r}")
        qc = c / gc
        q[qe] = q.get(qe, Fraction(0)) + qc
        for e2, c2 in gtail:
            e3 = tuple(a + b for a, b in zip(qe, e2))
            nc = r.get(e3)
            if nc is None:
                r[e3] = -qc * c2
                heapq.heappush(heap, enc(e3))
            else:
                nc = nc - qc * c2
                if nc:
                    r[e3] = nc
                else:
                    del r[e3]
    return MPoly(f.vars, {e: c for e, c in q.items() if c})


def divides(g: MPoly, f: MPoly) -> bool:
    try:
        exact_divide(f, g)
        return True
    except ExactDivisionError:
        return False


def _split_by_var(f: MPoly, i: int) -> Dict[int, MPoly]:
    """View f as a polynomial in variable i with MPoly coefficients
    (the coefficients live in the same variable tuple, with exponent 0 at i)."""
    out: Dict[int, Dict[Exponent, Fraction]] = {}
    for e, c in f.terms.items():
        d = e[i]
        ne = list(e)
        ne[i] = 0
        out.setdefault(d, {})[tuple(ne)] = c
    return {d: MPoly(f.vars, t) for d, t in out.items()}


def _join_by_var(coeffs: Dict[int, MPoly], i: int, vars) -> MPoly:
    t: Dict[Exponent, Fraction] = {}
    for d, p in coeffs.items():
        for e, c in p.terms.items():
            ne = list(e)
            ne[i] += d
            t[tuple(ne)] = c
    return MPoly(vars, t)


def mpoly_gcd(f: MPoly, g: MPoly) -> MPoly:
    """GCD over Q, normalized to positive unit content (so the result is
    primitive with positive leading coefficient).  Primitive PRS algorithm."""
    f._check(g)
    vars = f.vars
    if f.is_zero():
        return g.primitive() if not g.is_zero() else MPoly.zero(vars)
    if g.is_zero():
        return f.primitive()
    if f.is_constant() or g.is_constant():
        return MPoly.const(vars, 1)
    # main variable: last one actually appearing in f or g
    main = max(
        i
        for i in range(len(vars))
        if f.degree_in(vars[i]) > 0 or g.degree_in(vars[i]) > 0
    )

    def content_wrt(p: MPoly) -> MPoly:
        cs = list(_split_by_var(p, main).values())
        acc = cs[0]
        for c in cs[1:]:
            acc = mpoly_gcd(acc, c)
            if acc.is_constant():
                break
        return acc if not acc.is_constant() else MPoly.const(vars, 1)

    def pp_wrt(p: MPoly, cont: MPoly) -> MPoly:
        return exact_divide(p, cont) if not cont.is_constant() else p

    cf, cg = content_wrt(f), content_wrt(g)
    a, b = pp_wrt(f, cf), pp_wrt(g, cg)
    cont_gcd = mpoly_gcd(cf, cg)

    def deg(p):
        return p.degree_in(vars[main])

    if deg(a) < deg(b):
        a, b = b, a
    while True:
        if b.is_zero():
            result = a
            break
        r = _pseudo_rem(a, b, main)
        if r.is_zero():
            result = b
            break
        cr = content_wrt(r)
        r = pp_wrt(r, cr)
        r = r.primitive()
        a, b = b, r
    result = result.primitive()
    if deg(result) == 0 and result.is_constant():
        result = MPoly.const(vars, 1)
    out = result * cont_gcd if not cont_gcd.is_constant() else result
    return out.primitive()


def _pseudo_rem(a: MPoly, b: MPoly, main: int) -> MPoly:
    """Pseudo-remainder of a by b with respect to variable index main."""
    vars = a.vars
    da = _split_by_var(a, main)
    db = _split_by_var(b, main)
    na, nb = max(da), max(db)
    lb = db[nb]
    r = dict(da)
    n = na
    while n >= nb and r:
        rn = r.get(n)
        if rn is None or rn.is_zero():
            r.pop(n, None)
            n = max(r, default=-1)
            continue
        # r := lb * r  -  rn * x^(n-nb) * b
        nr: Dict[int, MPoly] = {}
        for d, c in r.items():
            nr[d] = c * lb
        for d, c in db.items():
            t = nr.get(d + n - nb, MPoly.zero(vars)) - rn * c
            nr[d + n - nb] = t
        r = {d: c for d, c in nr.items() if not c.is_zero()}
        n = max(r, default=-1)
    return _join_by_var(r, main, vars)


# -- rational functions ----------------------------------------------------


class RatFun:
    """Normalized rational function: num/den coprime, den monic in grlex."""

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly, normalized: bool = False):
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        num._check(den)
        if not normalized:
            if num.is_zero():
                den = MPoly.const(num.vars, 1)
            else:
                g = mpoly_gcd(num, den)
                if not g.is_constant():
                    num = exact_divide(num, g)
                    den = exact_divide(den, g)
            _, lc = den.leading_term()
            if lc != 1:
                inv = Fraction(1) / lc
                num = num * inv
                den = den * inv
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_mpoly(cls, p: MPoly) -> "RatFun":
        return cls(p, MPoly.const(p.vars, 1), normalized=True)

    @classmethod
    def const(cls, vars, c) -> "RatFun":
        return cls.from_mpoly(MPoly.const(vars, c))

    @classmethod
    def variable(cls, vars, name) -> "RatFun":
        return cls.from_mpoly(MPoly.variable(vars, name))

    @property
    def vars(self):
        return self.num.vars

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_mpoly(self) -> MPoly:
        if not self.is_polynomial():
            raise ValueError(f"{self!r} is not polynomial")
        c = self.den.const_value()
        return self.num * (Fraction(1) / c)

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def const_value(self) -> Fraction:
        return self.num.const_value() / self.den.const_value()

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(x, vars):
        if isinstance(x, RatFun):
            return x
        if isinstance(x, MPoly):
            return RatFun.from_mpoly(x)
        if isinstance(x, (int, Fraction)):
            return RatFun.const(vars, x)
        return None

    def __add__(self, other):
        o = self._coerce(other, self.vars)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den, normalized=True)

    def __sub__(self, other):
        o = self._coerce(other, self.vars)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other, self.vars)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other, self.vars)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFun(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other, self.vars)
        return o / self

    def inv(self) -> "RatFun":
        return RatFun.const(self.vars, 1) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        out = RatFun.const(self.vars, 1)
        b = self
        while n:
            if n & 1:
                out = out * b
            b = b * b
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other, self.vars)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- evaluation --------------------------------------------------------

    def evaluate(self, binding: Mapping[str, Fraction]) -> Fraction:
        d = self.den.evaluate(binding)
        if d == 0:
            raise PoleError(f"denominator vanishes at {dict(binding)}")
        return self.num.evaluate(binding) / d

    def specialize(self, binding: Mapping[str, Fraction]) -> "RatFun":
        d = self.den.specialize(binding)
        if d.is_zero():
            raise PoleError(f"denominator vanishes identically at {dict(binding)}")
        return RatFun(self.num.specialize(binding), d)

    def subst(self, images: Mapping[str, MPoly], out_vars) -> "RatFun":
        d = self.den.subst(images, out_vars)
        if d.is_zero():
            raise PoleError("denominator vanishes identically under substitution")
        return RatFun(self.num.subst(images, out_vars), d)

    # -- printing ----------------------------------------------------------

    def __repr__(self):
        if self.is_polynomial():
            return repr(self.as_mpoly())
        return f"({self.num!r})/({self.den!r})"

    def latex(self, var_map=None) -> str:
        if self.is_polynomial():
            return self.as_mpoly().latex(var_map)
        return rf"\frac{{{self.num.latex(var_map)}}}{{{self.den.latex(var_map)}}}"

    def to_json_obj(self):
        return {"num": self.num.to_json_obj(), "den": self.den.to_json_obj()}

    @classmethod
    def from_json_obj(cls, obj) -> "RatFun":
        return cls(
            MPoly.from_json_obj(obj["num"]),
            MPoly.from_json_obj(obj["den"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))
