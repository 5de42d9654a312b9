"""Exact arithmetic foundation: rationals, sparse multivariate polynomials,
rational fractions, resultants and Bezout coefficients.

Polynomials carry an ordered tuple of variable names and a dictionary from
exponent tuples to nonzero coefficients. Coefficients are Python ``int`` when
integral and :class:`fractions.Fraction` otherwise, so that the common
integer-coefficient case never pays for fraction normalisation.

All values are immutable after construction.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence, Union

from . import kernels

BigRat = Fraction
Number = Union[int, Fraction]


class PolyError(ValueError):
    """Base class for polynomial-arithmetic errors."""


class VariableMismatchError(PolyError):
    pass


class ConstantInVariableError(PolyError):
    pass


class MultivariateInputError(PolyError):
    pass


class NotExactDivisionError(PolyError, ArithmeticError):
    pass


class UndeclaredVariableError(PolyError):
    pass


class NotCoprimeError(PolyError):
    """Raised when an operation needs a reduced fraction and cannot get one."""


class _MinusInfinity:
    """Degree of the zero polynomial.

    Compares below every integer and refuses arithmetic, so that it can never
    leak silently into a degree bound.
    """

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-oo"

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("modeq.-oo")

    def _no_arith(self, *args):
        raise TypeError("the degree of the zero polynomial does not support arithmetic")

    __add__ = __radd__ = __sub__ = __rsub__ = __mul__ = __rmul__ = _no_arith
    __int__ = __index__ = _no_arith


NEG_INF = _MinusInfinity()


def as_rat(x) -> Number:
    """Coerce to the canonical exact coefficient type."""
    if type(x) is int:
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return int(x)
    if isinstance(x, str):
        return as_rat(Fraction(x))
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or a string")
    return as_rat(Fraction(x))


def _div(a: Number, b: Number) -> Number:
    if type(a) is int and type(b) is int and not a % b:
        return a // b
    return as_rat(Fraction(a) / b)


class MPoly:
    """Sparse multivariate polynomial over Q with a fixed variable order."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple, Number] | None = None):
        self.vars = tuple(vars)
        nv = len(self.vars)
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nv:
                    raise VariableMismatchError(
                        f"exponent vector {e} does not match variables {self.vars}"
                    )
                if any(x < 0 for x in e):
                    raise PolyError(f"negative exponent in {e}")
                c = as_rat(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
            clean = {e: as_rat(c) for e, c in clean.items() if c}
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars: tuple, terms: dict) -> "MPoly":
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    # construction helpers

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "MPoly":
        return cls._raw(tuple(vars), {})

    @classmethod
    def const(cls, c, vars: Sequence[str]) -> "MPoly":
        vars = tuple(vars)
        c = as_rat(c)
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def gen(cls, name: str, vars: Sequence[str]) -> "MPoly":
        vars = tuple(vars)
        if name not in vars:
            raise VariableMismatchError(f"{name!r} is not one of {vars}")
        e = tuple(1 if v == name else 0 for v in vars)
        return cls._raw(vars, {e: 1})

    @classmethod
    def monomial(cls, exps: Sequence[int], vars: Sequence[str], c=1) -> "MPoly":
        return cls(vars, {tuple(exps): c})

    @classmethod
    def parse(cls, text: str, vars: Sequence[str] | None = None) -> "MPoly":
        return parse_poly(text, vars)

    @classmethod
    def from_univariate(cls, coeffs: Sequence, var: str, vars: Sequence[str]) -> "MPoly":
        """Build sum(coeffs[k] * var**k); coefficients may be numbers or MPoly."""
        vars = tuple(vars)
        idx = vars.index(var)
        terms: dict = {}
        for k, c in enumerate(coeffs):
            if isinstance(c, MPoly):
                c._check(vars)
                for e, v in c.terms.items():
                    if e[idx]:
                        raise PolyError("coefficient depends on the main variable")
                    ee = e[:idx] + (k,) + e[idx + 1 :]
                    terms[ee] = v
            else:
                c = as_rat(c)
                if c:
                    e = [0] * len(vars)
                    e[idx] = k
                    terms[tuple(e)] = c
        return cls._raw(vars, terms)

    # basic queries

    def _check(self, vars: tuple) -> None:
        if self.vars != vars:
            raise VariableMismatchError(f"variables {self.vars} and {vars} differ")

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            other._check(self.vars)
            return other
        return MPoly.const(other, self.vars)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Number:
        if not self.is_constant():
            raise PolyError("polynomial is not constant")
        return self.terms.get((0,) * self.nvars, 0)

    def constant_term(self) -> Number:
        return self.terms.get((0,) * self.nvars, 0)

    def total_degree(self, exclude: Iterable[str] = ()):
        """Total degree, optionally ignoring some variables; zero gives NEG_INF."""
        if not self.terms:
            return NEG_INF
        skip = {self.vars.index(v) for v in exclude}
        if skip:
            return max(sum(x for i, x in enumerate(e) if i not in skip) for e in self.terms)
        return max(sum(e) for e in self.terms)

    def degree(self, var: str):
        if not self.terms:
            return NEG_INF
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def degrees(self) -> dict:
        return {v: self.degree(v) for v in self.vars}

    def used_vars(self) -> tuple:
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms))

    def is_univariate(self) -> bool:
        return len(self.used_vars()) <= 1

    def coefficients(self) -> list:
        return list(self.terms.values())

    def leading_term(self) -> tuple:
        """(exponent, coefficient) of the lexicographically largest monomial."""
        e = max(self.terms)
        return e, self.terms[e]

    def __len__(self) -> int:
        return len(self.terms)

    # arithmetic

    def __neg__(self) -> "MPoly":
        return MPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "MPoly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for e, c in small.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = as_rat(v)
            else:
                out.pop(e, None)
        return MPoly._raw(self.vars, out)

    __radd__ = __add__

    def __sub__(self, other) -> "MPoly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MPoly":
        return (-self) + other

    def __mul__(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            other._check(self.vars)
            return MPoly._raw(self.vars, kernels.poly_mul(self.terms, other.terms))
        try:
            c = as_rat(other)
        except TypeError:
            return NotImplemented
        if not c:
            return MPoly.zero(self.vars)
        return MPoly._raw(self.vars, {e: as_rat(v * c) for e, v in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MPoly":
        if not isinstance(k, int) or k < 0:
            raise PolyError("exponent must be a non-negative integer")
        result = MPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "MPoly":
        return self * c

    def divexact(self, other) -> "MPoly":
        """Exact quotient; raises NotExactDivisionError if other does not divide self."""
        if not isinstance(other, MPoly):
            c = as_rat(other)
            if not c:
                raise ZeroDivisionError("division by zero")
            return MPoly._raw(self.vars, {e: _div(v, c) for e, v in self.terms.items()})
        other._check(self.vars)
        if other.is_constant():
            return self.divexact(other.constant_value())
        q = kernels.poly_divexact(self.terms, other.terms)
        if q is None:
            raise NotExactDivisionError("division is not exact")
        return MPoly._raw(self.vars, q)

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.vars == other.vars and self.terms == other.terms
        try:
            return self.is_constant() and self.constant_value() == as_rat(other)
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # evaluation and substitution

    def _point(self, point) -> list:
        if isinstance(point, Mapping):
            missing = [v for v in self.vars if v not in point]
            if missing:
                raise VariableMismatchError(f"no value for {missing}")
            return [as_rat(point[v]) for v in self.vars]
        vals = [as_rat(x) for x in point]
        if len(vals) != self.nvars:
            raise VariableMismatchError(f"expected {self.nvars} values, got {len(vals)}")
        return vals

    def eval(self, point) -> Number:
        """Value at a rational point (mapping name -> value, or sequence)."""
        vals = self._point(point)
        powers = [dict() for _ in vals]
        total = 0
        for e, c in self.terms.items():
            t = c
            for i, x in enumerate(e):
                if x:
                    pw = powers[i].get(x)
                    if pw is None:
                        pw = vals[i] ** x
                        powers[i][x] = pw
                    t = t * pw
            total += t
        return as_rat(total)

    __call__ = eval

    def subs_values(self, values: Mapping[str, Number]) -> "MPoly":
        """Substitute numbers for some variables; the variable list is kept."""
        idx = {self.vars.index(v): as_rat(x) for v, x in values.items()}
        out: dict = {}
        for e, c in self.terms.items():
            t = c
            ee = list(e)
            for i, x in idx.items():
                if ee[i]:
                    t = t * x ** ee[i]
                    ee[i] = 0
            if t:
                k = tuple(ee)
                out[k] = out.get(k, 0) + t
        return MPoly(self.vars, out)

    def substitute(self, mapping: Mapping[str, "MPoly"], new_vars: Sequence[str]) -> "MPoly":
        """Compose: replace every variable by a polynomial in ``new_vars``."""
        new_vars = tuple(new_vars)
        missing = [v for v in self.used_vars() if v not in mapping]
        if missing:
            raise VariableMismatchError(f"substitution does not map {missing}")
        images = []
        for v in self.vars:
            img = mapping.get(v)
            if img is None:
                images.append(None)
                continue
            if not isinstance(img, MPoly):
                img = MPoly.const(img, new_vars)
            img._check(new_vars)
            images.append(img)
        cache: list[dict] = [dict() for _ in self.vars]

        def power(i, k):
            p = cache[i].get(k)
            if p is None:
                p = images[i] ** k
                cache[i][k] = p
            return p

        result = MPoly.zero(new_vars)
        for e, c in self.terms.items():
            t = MPoly.const(c, new_vars)
            for i, x in enumerate(e):
                if x:
                    t = t * power(i, x)
            result = result + t
        return result

    def with_vars(self, new_vars: Sequence[str]) -> "MPoly":
        """Re-embed into another variable list containing every used variable."""
        new_vars = tuple(new_vars)
        if new_vars == self.vars:
            return self
        used = self.used_vars()
        missing = [v for v in used if v not in new_vars]
        if missing:
            raise VariableMismatchError(f"{missing} not in {new_vars}")
        pos = [(self.vars.index(v), new_vars.index(v)) for v in used]
        out = {}
        for e, c in self.terms.items():
            ee = [0] * len(new_vars)
            for i, j in pos:
                ee[j] = e[i]
            out[tuple(ee)] = c
        return MPoly._raw(new_vars, out)

    def diff(self, var: str) -> "MPoly":
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ee = e[:i] + (e[i] - 1,) + e[i + 1 :]
                out[ee] = as_rat(c * e[i])
        return MPoly._raw(self.vars, out)

    # content

    def content(self) -> Fraction:
        """Positive rational c with self / c primitive with integer coefficients."""
        if not self.terms:
            return Fraction(0)
        return _content(self.terms.values())

    def primitive(self) -> "MPoly":
        if not self.terms:
            return self
        return self.divexact(self.content())

    # univariate views

    def coeffs_in(self, var: str) -> list:
        """Coefficients of increasing powers of ``var``, as MPoly in the same variables."""
        i = self.vars.index(var)
        if not self.terms:
            return []
        d = self.degree(var)
        parts = [dict() for _ in range(d + 1)]
        for e, c in self.terms.items():
            parts[e[i]][e[:i] + (0,) + e[i + 1 :]] = c
        return [MPoly._raw(self.vars, p) for p in parts]

    def lc_in(self, var: str) -> "MPoly":
        return self.coeffs_in(var)[-1]

    # printing

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                (v if x == 1 else f"{v}^{x}") for v, x in zip(self.vars, e) if x
            )
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = _fmt_coef(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_fmt_coef(a)}*{mono}"
            pieces.append((neg, body))
        out = ("-" if pieces[0][0] else "") + pieces[0][1]
        for neg, body in pieces[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __repr__(self) -> str:
        return f"MPoly({self.vars!r}, {str(self)!r})"


def _fmt_coef(c: Number) -> str:
    if isinstance(c, Fraction):
        return f"({c.numerator}/{c.denominator})"
    return str(c)


def _content(values: Iterable[Number]) -> Fraction:
    values = list(values)
    den = lcm(*[Fraction(c).denominator for c in values]) if values else 1
    nums = [int(Fraction(c) * den) for c in values]
    g = reduce(gcd, nums, 0)
    return Fraction(abs(g), den)


def mpoly_vars(*polys: MPoly) -> tuple:
    """Ordered union of the variable lists of several polynomials."""
    seen: list = []
    for p in polys:
        for v in p.vars:
            if v not in seen:
                seen.append(v)
    return tuple(seen)


def align(*polys: MPoly) -> list:
    """Re-embed polynomials into the union of their variable lists."""
    vs = mpoly_vars(*polys)
    return [p.with_vars(vs) for p in polys]


# pseudo-division and resultants. Univariate views are lists of MPoly
# coefficients (index k holds the coefficient of var^k), trailing zeros trimmed.


def _trim(lst: list) -> list:
    while lst and lst[-1].is_zero():
        lst.pop()
    return lst


def _ulist(p: MPoly, var: str) -> list:
    return _trim(p.coeffs_in(var))


def _from_ulist(lst: list, var: str, vars: tuple) -> MPoly:
    return MPoly.from_univariate(lst, var, vars) if lst else MPoly.zero(vars)


def _uadd(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        if i < len(a) and i < len(b):
            out.append(a[i] + b[i])
        elif i < len(a):
            out.append(a[i])
        else:
            out.append(b[i])
    return _trim(out)


def _uscale(a: list, c: MPoly) -> list:
    if c.is_zero():
        return []
    return _trim([x * c for x in a])


def _ushift_scale(a: list, c: MPoly, k: int) -> list:
    """c * var^k * a."""
    if c.is_zero() or not a:
        return []
    zero = MPoly.zero(c.vars)
    return [zero] * k + [x * c for x in a]


def _umul(a: list, b: list) -> list:
    if not a or not b:
        return []
    vars = a[0].vars
    out = [MPoly.zero(vars) for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return _trim(out)


def _udivexact(a: list, c: MPoly) -> list:
    return [x.divexact(c) for x in a]


def _prem(a: list, b: list):
    """Pseudo-division: lc(b)^(deg a - deg b + 1) * a = q * b + r."""
    db = len(b) - 1
    lcb = b[-1]
    vars = lcb.vars
    r = list(a)
    q: list = []
    e = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        k = len(r) - 1 - db
        lcr = r[-1]
        r = _uadd(_uscale(r, lcb), _ushift_scale(b, -lcr, k))
        q = _uadd(_uscale(q, lcb), _ushift_scale([MPoly.const(1, vars)], lcr, k))
        e -= 1
    if e > 0:
        f = lcb ** e
        r = _uscale(r, f)
        q = _uscale(q, f)
    return q, r


def _check_var(p: MPoly, var: str) -> None:
    if var not in p.vars:
        raise VariableMismatchError(f"{var!r} is not a variable of {p.vars}")


def _subresultant(a: MPoly, b: MPoly, var: str, cofactors: bool):
    a._check(b.vars)
    _check_var(a, var)
    vars = a.vars
    one = MPoly.const(1, vars)
    zero = MPoly.zero(vars)
    A, B = _ulist(a, var), _ulist(b, var)
    if not A or not B:
        return zero, zero, zero
    if len(A) == 1 and len(B) == 1:
        raise ConstantInVariableError(f"both polynomials are constant in {var!r}")
    UA, VA = [one], []
    UB, VB = [], [one]
    s = 1
    if len(A) < len(B):
        if (len(A) - 1) * (len(B) - 1) % 2:
            s = -1
        A, B = B, A
        UA, VA, UB, VB = UB, VB, UA, VA
    g = one
    h = one
    while len(B) > 1:
        da, db = len(A) - 1, len(B) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        q, R = _prem(A, B)
        div = g * h ** delta
        newB = _udivexact(R, div)
        if cofactors:
            f = B[-1] ** (delta + 1)
            neg_q = _uscale(q, -one)
            UR = _udivexact(_uadd(_uscale(UA, f), _umul(neg_q, UB)), div)
            VR = _udivexact(_uadd(_uscale(VA, f), _umul(neg_q, VB)), div)
            UA, VA, UB, VB = UB, VB, _trim(UR), _trim(VR)
        A, B = B, _trim(newB)
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g ** delta).divexact(h ** (delta - 1))
        if not B:
            return zero, zero, zero
    da = len(A) - 1
    b0 = B[0]
    if da == 0:
        z = one
        scale_num, scale_den = one, one
    else:
        scale_num = b0 ** (da - 1)
        scale_den = h ** (da - 1)
        z = (scale_num * b0).divexact(scale_den)
    z = z * s
    if not cofactors:
        return z, None, None
    u = _from_ulist(UB, var, vars) * scale_num * s
    v = _from_ulist(VB, var, vars) * scale_num * s
    u = u.divexact(scale_den)
    v = v.divexact(scale_den)
    return z, u, v


def resultant(a: MPoly, b: MPoly, var: str) -> MPoly:
    """Res_var(a, b): the Sylvester determinant, via the subresultant PRS."""
    return _subresultant(a, b, var, cofactors=False)[0]


def bezout(q: MPoly, e: MPoly, var: str):
    """Return (u, v, z) with u*q + v*e = z = Res_var(q, e) and deg_var(u) < deg_var(e)."""
    z, u, v = _subresultant(q, e, var, cofactors=True)
    if z.is_zero():
        return MPoly.zero(q.vars), MPoly.zero(q.vars), z
    return u, v, z


def prem(a: MPoly, b: MPoly, var: str) -> MPoly:
    """Pseudo-remainder of a by b with respect to var."""
    a._check(b.vars)
    B = _ulist(b, var)
    if not B:
        raise ZeroDivisionError("pseudo-division by zero")
    A = _ulist(a, var)
    if len(A) < len(B):
        return a
    return _from_ulist(_prem(A, B)[1], var, a.vars)


# univariate gcd over Q


def _univariate_var(*polys: MPoly):
    used = set()
    for p in polys:
        used.update(p.used_vars())
    if len(used) > 1:
        raise MultivariateInputError(f"expected univariate input, got variables {sorted(used)}")
    return used.pop() if used else None


def _dense(p: MPoly, var: str | None) -> list:
    if var is None:
        return [p.constant_value()] if p else []
    i = p.vars.index(var)
    d = p.degree(var)
    out = [0] * (d + 1) if p else []
    for e, c in p.terms.items():
        out[e[i]] = c
    return out


def _dense_rem(a: list, b: list) -> list:
    a = list(a)
    lb = b[-1]
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        c = _div(a[-1], lb)
        k = len(a) - 1 - db
        for j, y in enumerate(b):
            a[k + j] = as_rat(a[k + j] - c * y)
        while a and not a[-1]:
            a.pop()
    return a


def _dense_to_mpoly(coeffs: list, var: str | None, vars: tuple) -> MPoly:
    if var is None:
        return MPoly.const(coeffs[0] if coeffs else 0, vars)
    i = vars.index(var)
    terms = {}
    for k, c in enumerate(coeffs):
        if c:
            e = [0] * len(vars)
            e[i] = k
            terms[tuple(e)] = c
    return MPoly._raw(vars, terms)


def gcd_univariate(a: MPoly, b: MPoly) -> MPoly:
    """Monic gcd of two univariate polynomials over Q; gcd(a, 0) = monic(a)."""
    a._check(b.vars)
    var = _univariate_var(a, b)
    x, y = _dense(a, var), _dense(b, var)
    while y:
        x, y = y, _dense_rem(x, y)
    if not x:
        return MPoly.zero(a.vars)
    lc = x[-1]
    x = [_div(c, lc) for c in x]
    return _dense_to_mpoly(x, var, a.vars)


def univariate_divmod(a: MPoly, b: MPoly):
    a._check(b.vars)
    var = _univariate_var(a, b)
    x, y = _dense(a, var), _dense(b, var)
    if not y:
        raise ZeroDivisionError("division by the zero polynomial")
    q = [0] * max(0, len(x) - len(y) + 1)
    r = list(x)
    while r and len(r) >= len(y):
        c = _div(r[-1], y[-1])
        k = len(r) - len(y)
        q[k] = c
        for j, t in enumerate(y):
            r[k + j] = as_rat(r[k + j] - c * t)
        while r and not r[-1]:
            r.pop()
    return _dense_to_mpoly(q, var, a.vars), _dense_to_mpoly(r, var, a.vars)


# rational fractions

DECLARED_COPRIME = "declared_coprime"
CONTENT_REDUCED = "content_reduced_only"


class RatFrac:
    """Quotient num/den of polynomials in the same variables.

    Construction removes the shared rational content and makes the leading
    coefficient of the denominator positive. It never computes a multivariate
    gcd; ``coprimality`` records whether the caller vouches for coprimality.
    """

    __slots__ = ("num", "den", "coprimality")

    def __init__(self, num, den=None, coprimality: str = CONTENT_REDUCED):
        if coprimality not in (DECLARED_COPRIME, CONTENT_REDUCED):
            raise ValueError(f"unknown coprimality flag {coprimality!r}")
        if not isinstance(num, MPoly):
            if not isinstance(den, MPoly):
                raise TypeError("at least one of num, den must be an MPoly")
            num = MPoly.const(num, den.vars)
        if den is None:
            den = MPoly.const(1, num.vars)
        elif not isinstance(den, MPoly):
            den = MPoly.const(den, num.vars)
        num._check(den.vars)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = num, MPoly.const(1, num.vars)
        else:
            c = _content(list(num.terms.values()) + list(den.terms.values()))
            if den.leading_term()[1] < 0:
                c = -c
            if c != 1:
                num, den = num.divexact(c), den.divexact(c)
            if num.terms.keys() == den.terms.keys():
                ratio = Fraction(num.leading_term()[1]) / den.leading_term()[1]
                if num == den * ratio:
                    num, den = MPoly.const(ratio.numerator, num.vars), MPoly.const(
                        ratio.denominator, num.vars
                    )
                    coprimality = DECLARED_COPRIME
        self.num = num
        self.den = den
        self.coprimality = coprimality

    @property
    def vars(self) -> tuple:
        return self.num.vars

    @classmethod
    def parse(cls, text: str, vars: Sequence[str] | None = None, coprimality=CONTENT_REDUCED):
        f = parse_frac(text, vars)
        return cls(f.num, f.den, coprimality)

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def total_degree(self):
        """max(total degree of num, total degree of den)."""
        dn, dd = self.num.total_degree(), self.den.total_degree()
        return dd if dn is NEG_INF else max(dn, dd)

    def degree(self, var: str):
        dn, dd = self.num.degree(var), self.den.degree(var)
        return dd if dn is NEG_INF else max(dn, dd)

    def eval(self, point) -> Number:
        d = self.den.eval(point)
        if not d:
            raise ZeroDivisionError("evaluation at a pole")
        return _div(self.num.eval(point), d)

    __call__ = eval

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFrac):
            if isinstance(other, MPoly):
                other = RatFrac(other)
            else:
                try:
                    other = RatFrac(MPoly.const(other, self.vars))
                except TypeError:
                    return NotImplemented
        if other.vars != self.vars:
            return False
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def _lift(self, other) -> "RatFrac":
        if isinstance(other, RatFrac):
            return other
        if isinstance(other, MPoly):
            return RatFrac(other)
        return RatFrac(MPoly.const(other, self.vars))

    def __add__(self, other):
        o = self._lift(other)
        if self.den == o.den:
            return RatFrac(self.num + o.num, self.den)
        return RatFrac(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFrac(-self.num, self.den, self.coprimality)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        return RatFrac(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero fraction")
        return RatFrac(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFrac(self.den ** (-k), self.num ** (-k))
        return RatFrac(self.num**k, self.den**k, self.coprimality)

    def is_univariate(self) -> bool:
        return len(set(self.num.used_vars()) | set(self.den.used_vars())) <= 1

    def reduced(self) -> "RatFrac":
        """Univariate gcd reduction; multivariate input is returned unchanged."""
        if self.coprimality == DECLARED_COPRIME or not self.is_univariate():
            return self
        g = gcd_univariate(self.num, self.den)
        if g.is_constant():
            return RatFrac(self.num, self.den, DECLARED_COPRIME)
        num, r1 = univariate_divmod(self.num, g)
        den, r2 = univariate_divmod(self.den, g)
        assert r1.is_zero() and r2.is_zero()
        return RatFrac(num, den, DECLARED_COPRIME)

    def substitute(self, mapping: Mapping[str, MPoly], new_vars: Sequence[str]) -> "RatFrac":
        return RatFrac(self.num.substitute(mapping, new_vars), self.den.substitute(mapping, new_vars))

    def with_vars(self, new_vars: Sequence[str]) -> "RatFrac":
        return RatFrac(self.num.with_vars(new_vars), self.den.with_vars(new_vars), self.coprimality)

    def declare_coprime(self) -> "RatFrac":
        return RatFrac(self.num, self.den, DECLARED_COPRIME)

    def __str__(self) -> str:
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFrac({self.vars!r}, {str(self)!r})"


# parsing of polynomial and fraction expressions

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list:
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolyError(f"cannot parse {text!r} at position {pos}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    """Recursive-descent parser producing (num, den) pairs of MPoly."""

    def __init__(self, text: str, vars: Sequence[str] | None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        if vars is None:
            seen = []
            for kind, val in self.toks:
                if kind == "name" and val not in seen:
                    seen.append(val)
            vars = seen
        self.vars = tuple(vars)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self):
        if not self.toks:
            raise PolyError("empty expression")
        r = self.expr()
        if self.i != len(self.toks):
            raise PolyError(f"unexpected token {self.peek()[1]!r} in {self.text!r}")
        return r

    def expr(self):
        n, d = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            n2, d2 = self.term()
            if op == "-":
                n2 = -n2
            if d == d2:
                n = n + n2
            else:
                n, d = n * d2 + n2 * d, d * d2
        return n, d

    def term(self):
        n, d = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            n2, d2 = self.unary()
            if op == "*":
                n, d = n * n2, d * d2
            else:
                if n2.is_zero():
                    raise ZeroDivisionError(f"division by zero in {self.text!r}")
                n, d = n * d2, d * n2
        return n, d

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            n, d = self.unary()
            return -n, d
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        n, d = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise PolyError(f"exponent must be a non-negative integer in {self.text!r}")
            n, d = n**val, d**val
        return n, d

    def atom(self):
        kind, val = self.take()
        one = MPoly.const(1, self.vars)
        if kind == "num":
            return MPoly.const(val, self.vars), one
        if kind == "name":
            if val not in self.vars:
                raise UndeclaredVariableError(f"undeclared variable {val!r}")
            return MPoly.gen(val, self.vars), one
        if (kind, val) == ("op", "("):
            r = self.expr()
            if self.take() != ("op", ")"):
                raise PolyError(f"unbalanced parentheses in {self.text!r}")
            return r
        raise PolyError(f"unexpected token {val!r} in {self.text!r}")


def parse_frac(text: str, vars: Sequence[str] | None = None) -> RatFrac:
    """Parse a rational expression such as ``"I4*I6p/I10"``."""
    n, d = _Parser(text, vars).parse()
    return RatFrac(n, d)


def parse_poly(text: str, vars: Sequence[str] | None = None) -> MPoly:
    """Parse a polynomial expression; division is allowed by constants only."""
    n, d = _Parser(text, vars).parse()
    if not d.is_constant():
        raise PolyError(f"{text!r} is not a polynomial")
    return n.divexact(d.constant_value())
