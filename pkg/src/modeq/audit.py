"""Ingestion of modular-equation files and audits against the degree and height bounds."""

from __future__ import annotations

import json
import math
import os
import random
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, TextIO

from . import constpipe
from .heckefam import ELLIPTIC, HILBERT, SIEGEL, HeckeFamily, UnsupportedFamilyError, hecke_degree
from .heightlab import HeightError, height_frac, height_projective
from .polycore import (
    DECLARED_COPRIME,
    NEG_INF,
    MPoly,
    PolyError,
    RatFrac,
    UndeclaredVariableError,
    parse_poly,
)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


class SymmetryError(ParseError):
    pass


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class Equation:
    """One equation: coefficients keyed by (Y exponents, exponent of the last invariant)."""

    m: int
    terms: dict  # (tuple of y exponents, jlast exponent) -> RatFrac

    def y_degree(self, index: int) -> int:
        return max((k[0][index] for k in self.terms), default=0)


@dataclass
class ModularEquationSet:
    family: HeckeFamily
    jvars: tuple
    yvars: tuple
    equations: list
    jlast: str | None = None
    common_denominator: MPoly | None = None

    def __eq__(self, other):
        if not isinstance(other, ModularEquationSet):
            return NotImplemented
        return (
            self.family == other.family
            and self.jvars == other.jvars
            and self.yvars == other.yvars
            and self.jlast == other.jlast
            and self.common_denominator == other.common_denominator
            and len(self.equations) == len(other.equations)
            and all(a.m == b.m and a.terms == b.terms for a, b in zip(self.equations, other.equations))
        )

    def coefficients(self):
        for eq in self.equations:
            for key in sorted(eq.terms):
                yield eq.m, key, eq.terms[key]


# elliptic database text format

_LINE = re.compile(r"^\[\s*(\d+)\s*,\s*(\d+)\s*\]\s+([+-]?\d+)$")


def phi_to_set(phi: MPoly, ell: int) -> ModularEquationSet:
    """Wrap a classical modular polynomial in X, Y as a one-equation set."""
    fam = HeckeFamily.elliptic(ell)
    jv = ("J1",)
    ix, iy = phi.vars.index("X"), phi.vars.index("Y")
    cols: dict = {}
    for e, c in phi.terms.items():
        cols.setdefault(e[iy], {})[(e[ix],)] = c
    terms = {((j,), 0): RatFrac(MPoly(jv, t), coprimality=DECLARED_COPRIME) for j, t in cols.items()}
    return ModularEquationSet(fam, jv, ("Y1",), [Equation(1, terms)])


def set_to_phi(s: ModularEquationSet) -> MPoly:
    vs = ("X", "Y")
    out = {}
    for (ye, _), f in s.equations[0].terms.items():
        if not f.den.is_constant():
            raise SchemaError("elliptic coefficients must be polynomials")
        num = f.num.scale(Fraction(1) / f.den.constant_value()) if f.den.constant_value() != 1 else f.num
        for e, c in num.terms.items():
            out[(e[0], ye[0])] = c
    return MPoly(vs, out)


def read_elliptic_db(stream: TextIO, ell: int) -> ModularEquationSet:
    entries: dict = {}
    for lineno, raw in enumerate(stream, 1):
        line = raw.rstrip("\r\n").split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise ParseError(f"expected '[i,j] c', got {raw.rstrip()!r}", lineno)
        i, j, c = int(m.group(1)), int(m.group(2)), int(m.group(3))
        key = (max(i, j), min(i, j))
        if key in entries:
            prev_line, prev_c, prev_order = entries[key]
            if (i, j) == prev_order:
                raise ParseError(f"duplicate entry [{i},{j}]", lineno)
            if prev_c != c:
                raise SymmetryError(f"[{i},{j}] = {c} but [{j},{i}] = {prev_c} (line {prev_line})", lineno)
            continue
        entries[key] = (lineno, c, (i, j))
    terms = {}
    for (i, j), (_, c, _) in entries.items():
        if c == 0:
            continue
        terms[(i, j)] = c
        terms[(j, i)] = c
    return phi_to_set(MPoly(("X", "Y"), terms), ell)


def parse_elliptic_db(path: str, ell: int) -> ModularEquationSet:
    if path == "-":
        import sys

        return read_elliptic_db(sys.stdin, ell)
    with open(path, encoding="utf-8", newline="") as fh:
        return read_elliptic_db(fh, ell)


def serialize_elliptic_db(phi: MPoly) -> str:
    """One '[i,j] c' line per monomial with i >= j, highest degrees first."""
    ix, iy = phi.vars.index("X"), phi.vars.index("Y")
    rows = []
    for e, c in phi.terms.items():
        i, j = e[ix], e[iy]
        if i >= j:
            if Fraction(c).denominator != 1:
                raise ValueError("database format holds integer coefficients only")
            rows.append((i, j, int(c)))
    rows.sort(key=lambda r: (-r[0], -r[1]))
    return "".join(f"[{i},{j}] {c}\n" for i, j, c in rows)


# JSON format


def _parse_coeff(text, vars_: tuple, what: str) -> MPoly:
    if not isinstance(text, (str, int)):
        raise SchemaError(f"{what} must be a string")
    try:
        return parse_poly(str(text), vars_)
    except UndeclaredVariableError:
        raise
    except (PolyError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad {what} {text!r}: {exc}") from None


def modeq_from_json(obj) -> ModularEquationSet:
    if not isinstance(obj, dict):
        raise SchemaError("top level must be an object")
    for key in ("family", "variables", "equations"):
        if key not in obj:
            raise SchemaError(f"missing key {key!r}")
    try:
        fam = HeckeFamily.from_json(obj["family"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad family: {exc}") from None
    names = obj["variables"]
    if not isinstance(names, list) or not all(isinstance(v, str) for v in names):
        raise SchemaError("variables must be a list of names")
    jlast = obj.get("jlast")
    yvars = tuple(v for v in names if v.startswith("Y"))
    jvars = tuple(v for v in names if not v.startswith("Y") and v != jlast)
    if jlast is not None and jlast not in names:
        raise SchemaError(f"jlast {jlast!r} is not among the variables")
    common = None
    if obj.get("common_denominator") is not None:
        common = _parse_coeff(obj["common_denominator"], jvars, "common_denominator")
        if common.is_zero():
            raise SchemaError("common_denominator is zero")
    if not isinstance(obj["equations"], list):
        raise SchemaError("equations must be a list")
    eqs = []
    for eq in obj["equations"]:
        if not isinstance(eq, dict) or "m" not in eq or "terms" not in eq:
            raise SchemaError("each equation needs 'm' and 'terms'")
        terms = {}
        for t in eq["terms"]:
            if not isinstance(t, dict) or "y_exps" not in t or "num" not in t:
                raise SchemaError("each term needs 'y_exps' and 'num'")
            ye = t["y_exps"]
            if not isinstance(ye, list) or len(ye) != len(yvars) or not all(isinstance(x, int) and x >= 0 for x in ye):
                raise SchemaError(f"y_exps must list {len(yvars)} nonnegative integers")
            je = t.get("jlast_exp", 0)
            if not isinstance(je, int) or je < 0 or (je and jlast is None):
                raise SchemaError("bad jlast_exp")
            num = _parse_coeff(t["num"], jvars, "num")
            if "den" in t:
                den = _parse_coeff(t["den"], jvars, "den")
            else:
                den = common if common is not None else MPoly.const(1, jvars)
            if den.is_zero():
                raise SchemaError("den is zero")
            key = (tuple(ye), je)
            if key in terms:
                raise SchemaError(f"repeated monomial {key}")
            terms[key] = RatFrac(num, den, coprimality=DECLARED_COPRIME)
        eqs.append(Equation(int(eq["m"]), terms))
    return ModularEquationSet(fam, jvars, yvars, eqs, jlast, common)


def parse_modeq_json(path: str) -> ModularEquationSet:
    if path == "-":
        import sys

        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    return modeq_from_json(obj)


def modeq_to_json(s: ModularEquationSet) -> dict:
    names = list(s.jvars) + ([s.jlast] if s.jlast else []) + list(s.yvars)
    out = {"schema": 1, "family": s.family.to_json(), "variables": names}
    if s.jlast:
        out["jlast"] = s.jlast
    if s.common_denominator is not None:
        out["common_denominator"] = str(s.common_denominator)
    out["equations"] = [
        {
            "m": eq.m,
            "terms": [
                {"y_exps": list(k[0]), "jlast_exp": k[1], "num": str(eq.terms[k].num), "den": str(eq.terms[k].den)}
                for k in sorted(eq.terms)
            ],
        }
        for eq in s.equations
    ]
    return out


def serialize(s: ModularEquationSet) -> str:
    return json.dumps(modeq_to_json(s), indent=1)


# probabilistic coprimality

_PRIME = (1 << 61) - 1


def _eval_mod(p: MPoly, point: Sequence[int]) -> int:
    acc = 0
    for e, c in p.terms.items():
        c = Fraction(c)
        v = c.numerator * pow(c.denominator, -1, _PRIME) % _PRIME
        for x, k in zip(point, e):
            if k:
                v = v * pow(x, k, _PRIME) % _PRIME
        acc += v
    return acc % _PRIME


def _interp_mod(xs, ys) -> list:
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * pow(xs[i] - xs[i - j], -1, _PRIME) % _PRIME
    poly = [coef[-1]]
    for i in range(n - 2, -1, -1):
        nxt = [0] * (len(poly) + 1)
        for k, c in enumerate(poly):
            nxt[k + 1] = (nxt[k + 1] + c) % _PRIME
            nxt[k] = (nxt[k] - c * xs[i]) % _PRIME
        nxt[0] = (nxt[0] + coef[i]) % _PRIME
        poly = nxt
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _gcd_degree_mod(a: list, b: list) -> int:
    while b:
        inv = pow(b[-1], -1, _PRIME)
        while len(a) >= len(b):
            c = a[-1] * inv % _PRIME
            k = len(a) - len(b)
            for i, y in enumerate(b):
                a[k + i] = (a[k + i] - c * y) % _PRIME
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    return len(a) - 1


def likely_coprime(f: RatFrac, samples: int = 32, seed: int = 0) -> bool:
    """Common-root sampling: restrict to random lines and look for a shared root modulo a prime.

    Returns False when every sampled line shows a common factor.
    """
    if f.num.is_zero() or f.den.is_constant():
        return True
    n = len(f.vars)
    rng = random.Random(seed)
    deg = max(f.num.total_degree(), f.den.total_degree())
    lo, hi = -(1 << 63), 1 << 63
    for _ in range(samples):
        r = [rng.randint(lo, hi) % _PRIME for _ in range(n)]
        s = [rng.randint(lo, hi) % _PRIME for _ in range(n)]
        ts = list(range(1, deg + 2))
        pts = [[(ri * t + si) % _PRIME for ri, si in zip(r, s)] for t in ts]
        a = _interp_mod(ts, [_eval_mod(f.num, p) for p in pts])
        b = _interp_mod(ts, [_eval_mod(f.den, p) for p in pts])
        if not a or not b:
            continue
        if _gcd_degree_mod(a, b) == 0:
            return True
    return False


# audits

ENVELOPE_NOTE = "elliptic envelope 6l log l + 18l + 14 log l"
NO_CONSTANT_NOTE = "no explicit height constant for this family"


def elliptic_envelope(ell: int) -> float:
    return 6 * ell * math.log(ell) + 18 * ell + 14 * math.log(ell)


@dataclass(frozen=True)
class CoefficientAudit:
    m: int
    y_exps: tuple
    jlast_exp: int
    total_degree: int
    degrees: dict
    height: float | None
    degree_bound: int
    warning: str | None = None

    @property
    def degree_ok(self) -> bool:
        return self.total_degree <= self.degree_bound

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "y_exps": list(self.y_exps),
            "jlast_exp": self.jlast_exp,
            "total_degree": self.total_degree,
            "degrees": self.degrees,
            "height": self.height,
            "degree_bound": self.degree_bound,
            "degree_ok": self.degree_ok,
            "warning": self.warning,
        }


@dataclass
class AuditReport:
    family: HeckeFamily
    entries: list
    degree_bounds: dict  # m -> int
    max_degree: dict  # m -> int
    y_degree: dict  # m -> (observed, expected)
    max_height: float | None
    height_bound: float | None
    height_bound_kind: str
    timings: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def degree_pass(self) -> bool:
        return all(e.degree_ok for e in self.entries)

    @property
    def y_degree_pass(self) -> bool:
        return all(obs == exp for obs, exp in self.y_degree.values())

    @property
    def height_pass(self) -> bool | None:
        if self.height_bound is None or self.max_height is None:
            return None
        return self.max_height <= self.height_bound

    @property
    def passed(self) -> bool:
        return self.degree_pass and self.y_degree_pass and self.height_pass is not False

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "family": self.family.to_json(),
            "passed": self.passed,
            "degree_pass": self.degree_pass,
            "y_degree_pass": self.y_degree_pass,
            "height_pass": self.height_pass,
            "equations": [
                {
                    "m": m,
                    "max_total_degree": self.max_degree[m],
                    "degree_bound": self.degree_bounds[m],
                    "y_degree": self.y_degree[m][0],
                    "expected_y_degree": self.y_degree[m][1],
                }
                for m in sorted(self.degree_bounds)
            ],
            "max_height": self.max_height,
            "height_bound": self.height_bound,
            "height_bound_kind": self.height_bound_kind,
            "coefficients": [e.to_json() for e in self.entries],
            "timings": self.timings,
            "notes": self.notes,
        }

    def text(self) -> str:
        def mark(ok):
            return "n/a" if ok is None else ("pass" if ok else "FAIL")

        lines = [f"audit of {self.family.describe()}: {'PASS' if self.passed else 'FAIL'}"]
        lines.append(f"{'m':>3} {'max deg':>8} {'bound':>6} {'Y-deg':>6} {'expect':>6} {'result':>6}")
        for m in sorted(self.degree_bounds):
            obs, exp = self.y_degree[m]
            ok = self.max_degree[m] <= self.degree_bounds[m] and obs == exp
            lines.append(f"{m:>3} {self.max_degree[m]:>8} {self.degree_bounds[m]:>6} {obs:>6} {exp:>6} {mark(ok):>6}")
        h = "n/a" if self.max_height is None else f"{self.max_height:.6g}"
        hb = "none" if self.height_bound is None else f"{self.height_bound:.6g}"
        lines.append(f"max height {h}, bound {hb} ({self.height_bound_kind}): {mark(self.height_pass)}")
        for e in self.entries:
            if e.warning or not e.degree_ok:
                lines.append(f"  m={e.m} Y^{list(e.y_exps)} J^{e.jlast_exp}: deg {e.total_degree}"
                             f"/{e.degree_bound} {e.warning or ''}".rstrip())
        lines.extend(f"note: {n}" for n in self.notes)
        lines.append("timings: " + ", ".join(f"{k} {v:.3f}s" for k, v in self.timings.items()))
        return "\n".join(lines)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("MODEQ_THREADS", "1")))
    except ValueError:
        return 1


def _deg(x) -> int:
    return -1 if x is NEG_INF else x


def _audit_coefficient(args):
    m, key, f, bound, paranoid = args
    degs = {v: max(_deg(f.num.degree(v)), _deg(f.den.degree(v))) for v in f.vars}
    total = _deg(f.total_degree())
    warning = None
    if paranoid and not likely_coprime(f):
        warning = "numerator and denominator appear to share a factor"
    try:
        h = height_frac(f).value
    except (HeightError, PolyError) as exc:
        h = None
        warning = f"height refused: {exc}"
    return CoefficientAudit(m, key[0], key[1], total, degs, h, bound, warning)


def expected_y_degree(fam: HeckeFamily, m: int) -> int:
    return hecke_degree(fam) if m == 1 else 1


def audit(s: ModularEquationSet, paranoid: bool = False) -> AuditReport:
    fam = s.family
    if fam.kind not in (ELLIPTIC, SIEGEL, HILBERT):
        raise UnsupportedFamilyError(fam.kind)
    t0 = time.perf_counter()
    bounds = {eq.m: constpipe.degree_bound(fam, eq.m).bound for eq in s.equations}
    t1 = time.perf_counter()
    jobs = [(m, key, f, bounds[m], paranoid) for m, key, f in s.coefficients()]
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        entries = list(pool.map(_audit_coefficient, jobs))
    t2 = time.perf_counter()
    max_deg = {m: max((e.total_degree for e in entries if e.m == m), default=0) for m in bounds}
    ydeg = {}
    for eq in s.equations:
        idx = eq.m - 1
        obs = eq.y_degree(idx) if idx < len(s.yvars) else 0
        ydeg[eq.m] = (obs, expected_y_degree(fam, eq.m))
    heights = [e.height for e in entries if e.height is not None]
    notes = []
    if fam.kind == ELLIPTIC:
        # the whole polynomial has integer coefficients, so its height is log of the largest one
        allc = [c for _, _, f in s.coefficients() for c in list(f.num.terms.values())]
        max_h = height_projective(allc).value if allc else None
        hb, kind = elliptic_envelope(fam.level), ENVELOPE_NOTE
    elif fam.kind == SIEGEL:
        max_h = max(heights) if heights else None
        hb = constpipe.siegel_height_bound(fam)[0]
        kind = "explicit constant times d(delta) max(1, log l(delta))"
    else:
        max_h = max(heights) if heights else None
        hb, kind = None, NO_CONSTANT_NOTE
        notes.append(NO_CONSTANT_NOTE)
    t3 = time.perf_counter()
    timings = {"bounds": t1 - t0, "coefficients": t2 - t1, "heights": t3 - t2}
    return AuditReport(fam, entries, bounds, max_deg, ydeg, max_h, hb, kind, timings, notes)
