"""Exact integer q-expansions and the classical modular polynomials.

:class:`IntSeries` stores a truncated Laurent series in ``q^(1/rho)`` with
integer coefficients, as a dense list starting at some (possibly negative)
index. Every operation tracks the truncation order: ``trunc = T`` means all
coefficients of index ``< T`` are exact and nothing is known beyond.

``phi_elliptic(ell)`` builds the modular polynomial from power sums of the
``ell + 1`` conjugates of ``j`` under the Hecke correspondence, then reduces
the elementary symmetric functions to polynomials in ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels
from .heckefam import is_prime
from .polycore import MPoly


class RamificationError(ValueError):
    pass


class PrecisionError(ArithmeticError):
    """The working precision was too small to pin down the result."""


@dataclass(frozen=True)
class IntSeries:
    """sum_k c[k - start] q^(k/ramification) + O(q^(trunc/ramification))."""

    ramification: int
    start: int
    dense: tuple
    trunc: int

    def __post_init__(self):
        if self.ramification < 1:
            raise RamificationError("ramification must be positive")
        if len(self.dense) != max(0, self.trunc - self.start):
            raise ValueError("dense length does not match start and trunc")

    @classmethod
    def make(cls, ramification: int, start: int, coeffs, trunc: int) -> "IntSeries":
        """Normalize: drop leading zeros, pad or cut to the truncation."""
        coeffs = list(coeffs)[: max(0, trunc - start)]
        coeffs += [0] * (trunc - start - len(coeffs))
        i = 0
        while i < len(coeffs) and coeffs[i] == 0:
            i += 1
        if i == len(coeffs):
            return cls(ramification, trunc, (), trunc)
        return cls(ramification, start + i, tuple(coeffs[i:]), trunc)

    @classmethod
    def from_dict(cls, coeffs: dict, trunc: int, ramification: int = 1) -> "IntSeries":
        kept = {k: int(v) for k, v in coeffs.items() if k < trunc and v}
        if not kept:
            return cls(ramification, trunc, (), trunc)
        lo = min(kept)
        return cls.make(ramification, lo, [kept.get(k, 0) for k in range(lo, trunc)], trunc)

    @classmethod
    def one(cls, trunc: int, ramification: int = 1) -> "IntSeries":
        return cls.from_dict({0: 1}, trunc, ramification)

    @property
    def coeffs(self) -> dict:
        """Map from exponent numerator k to the nonzero coefficient of q^(k/ramification)."""
        return {self.start + i: c for i, c in enumerate(self.dense) if c}

    def coeff(self, k: int) -> int:
        if k >= self.trunc:
            raise PrecisionError(f"coefficient {k} is beyond the truncation {self.trunc}")
        if k < self.start:
            return 0
        return self.dense[k - self.start]

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return not any(self.dense)

    @property
    def valuation(self):
        return self.start if self.dense else None

    def _same(self, other: "IntSeries") -> None:
        if other.ramification != self.ramification:
            raise RamificationError("series have different ramification")

    def __add__(self, other: "IntSeries") -> "IntSeries":
        self._same(other)
        trunc = min(self.trunc, other.trunc)
        lo = min(self.start, other.start)
        out = [0] * max(0, trunc - lo)
        for s in (self, other):
            for i, c in enumerate(s.dense):
                k = s.start + i - lo
                if k < len(out):
                    out[k] += c
        return IntSeries.make(self.ramification, lo, out, trunc)

    def __neg__(self) -> "IntSeries":
        return IntSeries(self.ramification, self.start, tuple(-c for c in self.dense), self.trunc)

    def __sub__(self, other: "IntSeries") -> "IntSeries":
        return self + (-other)

    def scale(self, c: int) -> "IntSeries":
        return IntSeries.make(self.ramification, self.start, [c * x for x in self.dense], self.trunc)

    def __mul__(self, other) -> "IntSeries":
        if isinstance(other, int):
            return self.scale(other)
        self._same(other)
        if not self.dense or not other.dense:
            trunc = min(
                self.start + other.trunc if self.dense else self.trunc + other.start,
                other.start + self.trunc if other.dense else other.trunc + self.start,
            )
            return IntSeries(self.ramification, trunc, (), trunc)
        start = self.start + other.start
        trunc = min(self.start + other.trunc, other.start + self.trunc)
        n = trunc - start
        return IntSeries.make(self.ramification, start, kernels.series_mul(list(self.dense), list(other.dense), n), trunc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntSeries":
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return IntSeries.one(max(1, self.trunc - self.start), self.ramification)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self) -> "IntSeries":
        """1/s for a series whose leading coefficient is +-1."""
        if not self.dense:
            raise ZeroDivisionError("series is zero to the known precision")
        lead = self.dense[0]
        if lead not in (1, -1):
            raise ValueError("leading coefficient must be a unit for an integer inverse")
        n = self.trunc - self.start
        body = [c * lead for c in self.dense]
        inv = kernels.series_inverse(body, n)
        inv = [c * lead for c in inv]
        return IntSeries.make(self.ramification, -self.start, inv, -self.start + n)

    def substitute_power(self, k: int) -> "IntSeries":
        """s(q^k)."""
        if k < 1:
            raise ValueError("power must be positive")
        out = [0] * (len(self.dense) * k)
        for i, c in enumerate(self.dense):
            out[i * k] = c
        return IntSeries.make(self.ramification, self.start * k, out, self.trunc * k)

    def as_ramified(self, ell: int) -> "IntSeries":
        """The same series with q replaced by q^(1/ell), i.e. s(q^(1/ell))."""
        return IntSeries(self.ramification * ell, self.start, self.dense, self.trunc)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntSeries):
            return NotImplemented
        return (
            self.ramification == other.ramification
            and self.trunc == other.trunc
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ramification, self.trunc, tuple(sorted(self.coeffs.items()))))

    def agrees_with(self, other: "IntSeries") -> bool:
        """Equal on the common range of known coefficients."""
        return (self - other).is_zero()

    def __repr__(self):
        shown = list(self.coeffs.items())[:6]
        body = " + ".join(f"{c}*q^({k}/{self.ramification})" for k, c in shown)
        return f"IntSeries({body} + ... + O(q^({self.trunc}/{self.ramification})))"


def u_operator(s: IntSeries, ell: int) -> IntSeries:
    """Keep the terms whose exponent numerator is divisible by ell; divide ramification by ell."""
    if s.ramification % ell:
        raise RamificationError(f"ramification {s.ramification} is not divisible by {ell}")
    top = (s.trunc - 1) // ell + 1
    kept = {k // ell: c for k, c in s.coeffs.items() if k % ell == 0}
    return IntSeries.from_dict(kept, top, s.ramification // ell)


# classical series


def _sigma(power: int, n: int) -> list:
    out = [0] * n
    for d in range(1, n):
        dp = d**power
        for m in range(d, n, d):
            out[m] += dp
    return out


def eisenstein(weight: int, trunc: int) -> IntSeries:
    """E4 or E6, normalized with constant term 1, to O(q^trunc)."""
    factor = {4: 240, 6: -504}.get(weight)
    if factor is None:
        raise ValueError("only weights 4 and 6 are provided")
    sig = _sigma(weight - 1, trunc)
    coeffs = [1] + [factor * x for x in sig[1:]]
    return IntSeries.make(1, 0, coeffs, trunc)


def euler_product(trunc: int) -> IntSeries:
    """prod (1 - q^n) by Euler's pentagonal number theorem."""
    coeffs = [0] * trunc
    k = 0
    while True:
        hit = False
        for kk in ((k, -k) if k else (0,)):
            p = kk * (3 * kk - 1) // 2
            if p < trunc:
                coeffs[p] += -1 if kk % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return IntSeries.make(1, 0, coeffs, trunc)


def delta_series(trunc: int) -> IntSeries:
    """q prod (1 - q^n)^24, by the pentagonal product."""
    p = euler_product(trunc) ** 24
    return IntSeries.make(1, 1, p.dense, trunc)


def delta_from_eisenstein(trunc: int) -> IntSeries:
    """(E4^3 - E6^2)/1728, computed independently of the product formula."""
    e4, e6 = eisenstein(4, trunc), eisenstein(6, trunc)
    d = e4**3 - e6**2
    if any(c % 1728 for c in d.dense):
        raise ArithmeticError("E4^3 - E6^2 is not divisible by 1728")
    return IntSeries.make(1, d.start, [c // 1728 for c in d.dense], d.trunc)


def j_series(T: int) -> IntSeries:
    """j = E4^3/Delta = q^-1 + 744 + 196884 q + ..., exact for exponents below T."""
    if T < 2:
        raise ValueError("need T >= 2")
    n = T + 1
    e4 = eisenstein(4, n)
    p24 = euler_product(n) ** 24
    body = e4**3 * p24.inverse()
    return IntSeries.make(1, -1, body.dense, T)


def tau_values(n: int) -> list:
    """Ramanujan tau(1..n)."""
    d = delta_series(n + 1)
    return [d.coeff(k) for k in range(1, n + 1)]


# reduction to polynomials in j


class _JPowers:
    def __init__(self, j: IntSeries):
        self.j = j
        self.cache = {0: None, 1: j}

    def get(self, k: int) -> IntSeries:
        v = self.cache.get(k)
        if v is None:
            v = self.get(k // 2) * self.get(k - k // 2)
            self.cache[k] = v
        return v


def series_to_j_polynomial(s: IntSeries, j: IntSeries, var: str = "X", vars=None, _powers=None) -> MPoly:
    """Polynomial p with s = p(j) through the known precision.

    Eliminates the pole of s greedily from the top order down. Raises
    PrecisionError when a nonzero remainder is left.
    """
    if s.ramification != 1 or j.ramification != 1:
        raise RamificationError("series must have integer exponents")
    vars = tuple(vars or (var,))
    idx = vars.index(var)
    powers = _powers or _JPowers(j)
    cur = s
    terms = {}
    while cur.dense and cur.start < 0:
        k = -cur.start
        c = cur.dense[0]
        terms[tuple(k if i == idx else 0 for i in range(len(vars)))] = c
        cur = cur - powers.get(k).scale(c)
        if cur.trunc <= 0:
            raise PrecisionError("precision exhausted while removing poles")
    if cur.trunc <= 0:
        raise PrecisionError("constant term is beyond the truncation")
    c0 = cur.coeff(0)
    if c0:
        terms[(0,) * len(vars)] = c0
        cur = cur - IntSeries.one(cur.trunc).scale(c0)
    if not cur.is_zero():
        raise PrecisionError("series is not a polynomial in j to the working precision")
    if cur.trunc <= 1:
        raise PrecisionError("no coefficients left to confirm the reduction")
    return MPoly(vars, terms)


# modular polynomials

DEFAULT_MAX_LEVEL = 7


def phi_elliptic(ell: int, T_margin: int = 16, allow_large: bool = False) -> MPoly:
    """Classical modular polynomial Phi_ell in variables (X, Y), monic in Y."""
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if ell > DEFAULT_MAX_LEVEL and not allow_large:
        raise ValueError(f"ell = {ell} exceeds the default cap {DEFAULT_MAX_LEVEL}; pass allow_large")
    T = ell * (ell + 2) + T_margin
    deg = ell + 1
    nj = ell * T + ell + 2
    j = j_series(nj)
    j_T = IntSeries.make(1, j.start, j.dense, min(j.trunc, T + deg + 2))
    j_ell = j.substitute_power(ell)
    j_root = j.as_ramified(ell)

    power_sums = [None]
    pe, pr = j_ell, j_root
    for m in range(1, deg + 1):
        if m > 1:
            pe = pe * j_ell
            pr = pr * j_root
        power_sums.append(pe + u_operator(pr, ell).scale(ell))

    elem = [IntSeries.one(power_sums[1].trunc + 2 * ell * deg)]
    for m in range(1, deg + 1):
        acc = None
        for i in range(1, m + 1):
            term = elem[m - i] * power_sums[i]
            if i % 2 == 0:
                term = -term
            acc = term if acc is None else acc + term
        if any(c % m for c in acc.dense):
            raise ArithmeticError("Newton identity produced a non-integral series")
        elem.append(IntSeries.make(1, acc.start, [c // m for c in acc.dense], acc.trunc))

    vars = ("X", "Y")
    powers = _JPowers(j_T)
    result = MPoly(vars, {(0, deg): 1})
    for m in range(1, deg + 1):
        e_m = elem[m]
        if e_m.trunc < 2:
            raise PrecisionError("working precision too small")
        poly_x = series_to_j_polynomial(e_m, j_T, "X", vars, powers)
        sign = -1 if m % 2 else 1
        result = result + poly_x * MPoly(vars, {(0, deg - m): sign})
    _check_phi(result, ell)
    return result


def _check_phi(phi: MPoly, ell: int) -> None:
    deg = ell + 1
    if phi.degree("Y") != deg or phi.terms.get((0, deg)) != 1:
        raise ArithmeticError("modular polynomial is not monic of degree ell + 1 in Y")
    if phi.degree("X") != deg:
        raise ArithmeticError("modular polynomial has the wrong degree in X")
    if any(type(c) is not int for c in phi.terms.values()):
        raise ArithmeticError("modular polynomial has non-integral coefficients")
    swapped = MPoly(phi.vars, {(b, a): c for (a, b), c in phi.terms.items()})
    if swapped != phi:
        raise ArithmeticError("modular polynomial is not symmetric")
    if not kernel_identity(phi, ell):
        raise ArithmeticError("Phi(j(q^ell), j(q)) does not vanish")


def kernel_identity(phi: MPoly, ell: int, T: int | None = None) -> bool:
    """Check Phi(j(q^ell), j(q)) = 0 through the truncation of the product."""
    deg = phi.degree("Y")
    T = T or ell * (ell + 2) + 16
    N = T + 2 * deg * ell + 2
    j = j_series(N)
    jl = j.substitute_power(ell)
    px = _JPowers(jl)
    py = _JPowers(j)
    total = None
    for (a, b), c in phi.terms.items():
        t = IntSeries.one(N * ell)
        if a:
            t = px.get(a)
        if b:
            t = t * py.get(b) if a else py.get(b)
        t = t.scale(c)
        total = t if total is None else total + t
    return total.trunc > 0 and total.is_zero()
