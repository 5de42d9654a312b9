"""Absolute logarithmic Weil heights over Q and closed-form height bounds.

Heights of rational data are exact up to the final ``log``. Heights of
algebraic numbers go through the Mahler measure of the minimal polynomial,
whose roots are isolated by Aberth iteration and then certified with
inclusion disks. Bound formulas return floats nudged upward so that they
remain valid upper bounds after rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Sequence

import mpmath

from .polycore import (
    DECLARED_COPRIME,
    NEG_INF,
    MPoly,
    NotCoprimeError,
    RatFrac,
    as_rat,
)


class HeightError(ValueError):
    pass


class NonConvergenceError(HeightError):
    pass


class HypothesisViolatedError(HeightError):
    """A precondition of a bound formula fails; ``condition`` names it."""

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        super().__init__(f"hypothesis violated: {condition}" + (f" ({detail})" if detail else ""))


def up(x: float) -> float:
    """Round a computed float upward by a few ulps."""
    if x == 0:
        return 0.0
    return math.nextafter(x + abs(x) * 4 * 2.0**-52, math.inf)


def _down(x: float) -> float:
    if x == 0:
        return 0.0
    return math.nextafter(x - abs(x) * 4 * 2.0**-52, -math.inf)


def log_int(n: int) -> float:
    """Natural log of a positive integer of any size."""
    if n <= 0:
        raise ValueError("log of a non-positive integer")
    b = n.bit_length()
    if b < 1000:
        return math.log(n)
    shift = b - 64
    return math.log(n >> shift) + shift * math.log(2)


@dataclass(frozen=True)
class HeightValue:
    value: float
    enclosure: tuple | None = None
    exact_max: int | None = field(default=None, compare=False)

    def __float__(self):
        return self.value

    def __le__(self, other):
        return self.value <= float(other)

    def __lt__(self, other):
        return self.value < float(other)

    def __ge__(self, other):
        return self.value >= float(other)

    def __gt__(self, other):
        return self.value > float(other)


def _primitive_integers(values: Sequence) -> list:
    vals = [Fraction(as_rat(v)) for v in values]
    den = lcm(*[v.denominator for v in vals]) if vals else 1
    ints = [int(v * den) for v in vals]
    g = reduce(gcd, ints, 0)
    if g == 0:
        raise HeightError("the zero tuple has no projective height")
    return [x // g for x in ints]


def height_projective(values: Sequence) -> HeightValue:
    """Height of the projective point (y0 : ... : yn) with rational entries."""
    if not list(values):
        raise HeightError("empty tuple")
    m = max(abs(x) for x in _primitive_integers(values))
    return HeightValue(log_int(m), exact_max=m)


def height_affine(values) -> HeightValue:
    if not isinstance(values, (list, tuple)):
        values = [values]
    return height_projective([1, *values])


def height_poly(p: MPoly) -> HeightValue:
    return height_affine(list(p.terms.values()))


def height_frac(f: RatFrac) -> HeightValue:
    """Height of a fraction written with coprime numerator and denominator."""
    if f.coprimality != DECLARED_COPRIME:
        if not f.is_univariate():
            raise NotCoprimeError(
                "multivariate fraction not declared coprime; its height is not well defined"
            )
        f = f.reduced()
    return height_projective(list(f.num.terms.values()) + list(f.den.terms.values()))


# algebraic numbers through the Mahler measure


def _dense_coeffs(minpoly: MPoly) -> list:
    used = minpoly.used_vars()
    if len(used) > 1:
        raise HeightError("minimal polynomial must be univariate")
    if not used:
        raise HeightError("minimal polynomial must have positive degree")
    i = minpoly.vars.index(used[0])
    d = minpoly.degree(used[0])
    co = [Fraction(0)] * (d + 1)
    for e, c in minpoly.terms.items():
        co[e[i]] = Fraction(c)
    return _primitive_integers(co)


def _aberth(coeffs: list, prec_bits: int, max_iter: int, start=None):
    """Roots of sum coeffs[k] x^k (integer coefficients) by Aberth iteration."""
    n = len(coeffs) - 1
    mp = mpmath.mp
    mp.prec = prec_bits
    a = [mpmath.mpf(c) for c in coeffs]
    da = [k * a[k] for k in range(1, n + 1)]

    def horner(cs, z):
        r = mpmath.mpc(0)
        for c in reversed(cs):
            r = r * z + c
        return r

    if start is None:
        lead = abs(a[-1])
        radius = 1 + max(abs(c) for c in a[:-1]) / lead
        radius = min(radius, mpmath.mpf(2) ** 64)
        # fixed offset phase avoids symmetric starting patterns
        zs = [
            radius / 2 * mpmath.expj(2 * mpmath.pi * k / n + mpmath.mpf("0.4"))
            for k in range(n)
        ]
    else:
        zs = [mpmath.mpc(z) for z in start]
    eps = mpmath.mpf(2) ** (-prec_bits + 8)
    for it in range(max_iter):
        biggest = mpmath.mpf(0)
        new = list(zs)
        for i, z in enumerate(zs):
            p = horner(a, z)
            if p == 0:
                continue
            ratio = p / horner(da, z)
            s = mpmath.mpc(0)
            for j, w in enumerate(new):
                if j != i:
                    diff = z - w
                    if diff != 0:
                        s += 1 / diff
            denom = 1 - ratio * s
            step = ratio if denom == 0 else ratio / denom
            new[i] = z - step
            biggest = max(biggest, abs(step) / max(1, abs(z)))
        zs = new
        if biggest < eps:
            return zs, it + 1
    raise NonConvergenceError(f"Aberth iteration did not converge in {max_iter} steps")


def _inclusion_radii(coeffs: list, zs: list):
    """Disk radii n*|p(z_i)|/|a_n prod_{j!=i}(z_i - z_j)|; None if not disjoint."""
    n = len(zs)
    a = [mpmath.mpf(c) for c in coeffs]
    radii = []
    for i, z in enumerate(zs):
        p = mpmath.mpc(0)
        for c in reversed(a):
            p = p * z + c
        prod = a[-1]
        for j, w in enumerate(zs):
            if j != i:
                prod *= z - w
        if prod == 0:
            return None
        # factor 2 absorbs the rounding of the evaluation at working precision
        radii.append(2 * n * abs(p) / abs(prod) + mpmath.mpf(2) ** (-mpmath.mp.prec + 4) * (1 + abs(z)))
    for i in range(n):
        for j in range(i + 1, n):
            if abs(zs[i] - zs[j]) <= radii[i] + radii[j]:
                return None
    return radii


def _logplus_interval(z, r):
    lo_abs = max(mpmath.mpf(0), abs(z) - r)
    hi_abs = abs(z) + r
    lo = mpmath.log(lo_abs) if lo_abs > 1 else mpmath.mpf(0)
    hi = mpmath.log(hi_abs) if hi_abs > 1 else mpmath.mpf(0)
    return lo, hi


def height_algebraic(minpoly: MPoly, tol: float = 1e-12, max_iter: int = 10_000) -> HeightValue:
    """Height of a root of ``minpoly`` (assumed irreducible over Q).

    Equals log(Mahler measure)/degree; the enclosure is certified by
    disjoint inclusion disks around the Aberth approximations.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    coeffs = _dense_coeffs(minpoly)
    n = len(coeffs) - 1
    lead = abs(coeffs[-1])
    if n == 1:
        root = Fraction(-coeffs[0], coeffs[1])
        v = height_affine([root]).value
        return HeightValue(v, (_down(v), up(v)))
    size = max(abs(c) for c in coeffs).bit_length()
    prec = max(80, 2 * size + 64)
    start = None
    used = 0
    saved = mpmath.mp.prec
    try:
        while used < max_iter:
            zs, its = _aberth(coeffs, prec, max_iter - used, start)
            used += its
            radii = _inclusion_radii(coeffs, zs)
            if radii is not None:
                lo = hi = mpmath.log(lead)
                for z, r in zip(zs, radii):
                    a, b = _logplus_interval(z, r)
                    lo += a
                    hi += b
                lo_f = _down(float(lo / n))
                hi_f = up(float(hi / n))
                if hi_f - lo_f <= tol:
                    mid = (lo + hi) / (2 * n)
                    return HeightValue(max(0.0, float(mid)), (max(0.0, lo_f), max(0.0, hi_f)))
            start = zs
            prec *= 2
            if prec > 1 << 16:
                break
    finally:
        mpmath.mp.prec = saved
    raise NonConvergenceError("root isolation could not be certified (repeated roots?)")


# closed-form bounds


@dataclass(frozen=True)
class EvalBlock:
    """One block of variables: its size, the degree of P in it, and h(values)."""

    size: int
    degree: int
    height: float


def bound_eval_height(hP: float, blocks: Sequence[EvalBlock]) -> float:
    """h(P) + sum(#I_k log(d_k + 1)) + sum(d_k h(y_k)): bounds h(P(y)) for a point split into blocks."""
    total = float(hP)
    for b in blocks:
        if b.size < 0 or b.degree < 0:
            raise ValueError("block sizes and degrees must be non-negative")
        total += b.size * math.log(b.degree + 1) + b.degree * float(b.height)
    return up(total)


def check_eval_height(p: MPoly, point: dict, partition: Sequence[Sequence[str]]) -> tuple:
    """(h(p(point)), matching bound) for a partition of the variables into blocks."""
    flat = [v for blk in partition for v in blk]
    if sorted(flat) != sorted(p.vars):
        raise ValueError("partition must cover every variable exactly once")
    blocks = []
    for blk in partition:
        others = [v for v in p.vars if v not in blk]
        deg = p.total_degree(exclude=others)
        if deg is NEG_INF:
            deg = 0
        blocks.append(EvalBlock(len(blk), deg, height_affine([point[v] for v in blk]).value))
    val = p.eval(point)
    return height_affine([val]).value, bound_eval_height(height_poly(p).value, blocks)


def bound_monic_from_roots(root_heights: Sequence[float], d: int) -> float:
    """sum h(alpha_k) + d log 2: bounds h(prod (Y - alpha_k))."""
    if len(root_heights) != d:
        raise ValueError("need exactly d root heights")
    return up(sum(float(h) for h in root_heights) + d * math.log(2))


def bound_root_height(hP: float) -> float:
    """h(P) + log 2: bounds the height of any root of P."""
    if hP < 0:
        raise ValueError("heights are non-negative")
    return up(float(hP) + math.log(2))


@dataclass(frozen=True)
class InterpBoundParams:
    """Parameters of the interpolation bounds.

    The evaluation points are integers in [A, B]; ``D`` and ``M`` default to
    ``B - A`` and ``max(|A|, |B|)`` and may be overridden.
    """

    A: int
    B: int
    d: int
    N: int
    H: float
    eta: float = 1
    C_L: float = 960
    d_L: int = 1
    D: float | None = None
    M: float | None = None

    def __post_init__(self):
        if self.B < self.A:
            raise ValueError("need B >= A")
        if self.N < 1:
            raise ValueError("need N >= 1")
        if self.H < 0:
            raise ValueError("need H >= 0")
        if self.eta < 1:
            raise ValueError("need eta >= 1")
        if self.D is None:
            object.__setattr__(self, "D", self.B - self.A)
        if self.M is None:
            object.__setattr__(self, "M", max(abs(self.A), abs(self.B)))


def bound_interp_poly(p: InterpBoundParams) -> float:
    """(N/(N-d))H + D log D + d log(2M) + log(d+1)."""
    if p.N <= p.d:
        raise HypothesisViolatedError("N > d", f"N={p.N}, d={p.d}")
    if p.D < 1:
        raise HypothesisViolatedError("D >= 1", f"D={p.D}")
    val = (
        p.N / (p.N - p.d) * p.H
        + p.D * math.log(p.D)
        + p.d * math.log(2 * p.M)
        + math.log(p.d + 1)
    )
    return up(val)


def bound_interp_frac(p: InterpBoundParams) -> float:
    """H + C_L eta d log(eta d H) + d log(2M) + log(d+1), after checking its hypotheses."""
    log2m = math.log(2 * p.M)
    if p.H < max(4.0, log2m) * (1 - 1e-12):
        raise HypothesisViolatedError("H >= max(4, log(2M))", f"H={p.H}, log(2M)={log2m}")
    if p.N < p.D / p.eta:
        raise HypothesisViolatedError("#points >= D/eta", f"N={p.N}, D/eta={p.D / p.eta}")
    need = max(p.eta * p.d**3 * p.H, 4 * p.eta * p.d * p.d_L)
    if p.D < need:
        raise HypothesisViolatedError(
            "D >= max(eta d^3 H, 4 eta d d_L)", f"D={p.D}, required {need}"
        )
    val = (
        p.H
        + p.C_L * p.eta * p.d * math.log(p.eta * p.d * p.H)
        + p.d * log2m
        + math.log(p.d + 1)
    )
    return up(val)
