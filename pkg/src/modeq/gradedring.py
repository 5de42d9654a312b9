"""Graded rings of modular forms and rewriting of weight-0 quotients.

A :class:`GradedPresentation` lists generators ``f_1..f_r`` with their
weights, invariants ``J_1..J_{n+1}`` defined as weight-0 quotients of
generator polynomials, and for every ``k < r`` a relation

    xi_k * f_k**beta_k / lambda_k = P_k(J) / Q_k(J)

with ``xi_k`` and ``lambda_k`` monomials in ``f_{k+1}..f_r``. The two
rewriting algorithms turn a quotient ``f/g`` of equal-weight forms into a
fraction of invariants whose degree is bounded by the symmetric geometric
complexity times the weight.

Generators need not be algebraically independent: a presentation may carry
a *realization* sending each generator to a polynomial in free variables
(for elliptic forms, ``Delta = (E4^3 - E6^2)/1728``). Identities are checked
after realization.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import ceil, floor, gcd
from typing import Mapping, Sequence

from .polycore import (
    NEG_INF,
    MPoly,
    PolyError,
    RatFrac,
    bezout,
    parse_frac,
    parse_poly,
    prem,
)


class PresentationError(ValueError):
    """Malformed presentation data."""


class WeightMismatchError(ValueError):
    pass


class ResultantZeroError(ArithmeticError):
    pass


CASE1 = "case1"
CASE2 = "case2"


def beta_exponents(weights: Sequence[int]) -> list:
    """Minimal beta_k with beta_k*w_k in Z w_{k+1} + ... + Z w_r."""
    if len(weights) < 2:
        raise ValueError("need at least two weights")
    out = []
    for k in range(len(weights) - 1):
        g = reduce(gcd, weights[k + 1 :])
        out.append(g // gcd(weights[k], g))
    return out


@dataclass(frozen=True)
class Relation:
    """Data ``(beta, xi, lambda, P, Q)`` attached to one generator.

    ``xi`` and ``lam`` are exponent tuples over the generators; ``P`` and
    ``Q`` are polynomials in the invariants.
    """

    beta: int
    xi: tuple
    lam: tuple
    P: MPoly
    Q: MPoly


def _monomial_exps(text: str, names: tuple) -> tuple:
    p = parse_poly(text, names)
    if len(p.terms) != 1 or next(iter(p.terms.values())) != 1:
        raise PresentationError(f"{text!r} is not a monic monomial")
    return next(iter(p.terms))


def _monomial_str(exps: tuple, names: tuple) -> str:
    return str(MPoly(names, {exps: 1}))


@dataclass(frozen=True)
class GradedPresentation:
    name: str
    generators: tuple  # ((name, weight), ...)
    invariants: tuple  # ((name, RatFrac in generator variables), ...)
    relations: tuple  # (Relation, ...) one per generator except the last
    E: MPoly
    case_tag: str
    free_vars: tuple = ()
    realization: Mapping = field(default_factory=dict)

    # basic data

    @property
    def gen_names(self) -> tuple:
        return tuple(n for n, _ in self.generators)

    @property
    def weights(self) -> tuple:
        return tuple(w for _, w in self.generators)

    @property
    def inv_names(self) -> tuple:
        return tuple(n for n, _ in self.invariants)

    @property
    def r(self) -> int:
        return len(self.generators)

    @property
    def last_invariant(self) -> str:
        return self.inv_names[-1]

    @property
    def e(self) -> int:
        return self.E.degree(self.last_invariant)

    @property
    def d_E(self) -> int:
        d = self.E.total_degree(exclude=[self.last_invariant])
        return 0 if d is NEG_INF else d

    def weight_of(self, exps: Sequence[int]) -> int:
        return sum(x * w for x, w in zip(exps, self.weights))

    def poly_weight(self, p: MPoly):
        """Weight of a homogeneous generator polynomial; None if not homogeneous."""
        ws = {self.weight_of(e) for e in p.terms}
        if len(ws) > 1:
            return None
        return ws.pop() if ws else None

    # realization in free variables

    def _realize_gen_poly(self, p: MPoly) -> MPoly:
        if not self.realization:
            return p
        return p.substitute(self.realization, self.free_vars)

    def realized_invariants(self) -> list:
        cache = self.__dict__.get("_inv_cache")
        if cache is None:
            cache = [
                (self._realize_gen_poly(f.num), self._realize_gen_poly(f.den))
                for _, f in self.invariants
            ]
            object.__setattr__(self, "_inv_cache", cache)
        return cache

    def realize_invariant_poly(self, p: MPoly, degrees: Sequence[int]) -> MPoly:
        """Sum c_e prod num_i^e_i den_i^(D_i - e_i): p(J) times prod den_i^D_i."""
        inv = self.realized_invariants()
        vars_ = self.free_vars if self.realization else self.gen_names
        cache: dict = {}

        def pw(i, which, k):
            key = (i, which, k)
            v = cache.get(key)
            if v is None:
                v = inv[i][which] ** k
                cache[key] = v
            return v

        total = MPoly.zero(vars_)
        for e, c in p.terms.items():
            t = MPoly.const(c, vars_)
            for i, x in enumerate(e):
                if x:
                    t = t * pw(i, 0, x)
                if degrees[i] - x:
                    t = t * pw(i, 1, degrees[i] - x)
            total = total + t
        return total

    def fraction_identity(self, num: MPoly, den: MPoly, f: MPoly, g: MPoly) -> bool:
        """True iff num(J)/den(J) = f/g in the (realized) generator ring."""
        degs = [
            max(0, _deg0(num, v), _deg0(den, v)) for v in self.inv_names
        ]
        n_real = self.realize_invariant_poly(num, degs)
        d_real = self.realize_invariant_poly(den, degs)
        f_real = self._realize_gen_poly(f)
        g_real = self._realize_gen_poly(g)
        if d_real.is_zero() or g_real.is_zero():
            return False
        return n_real * g_real == d_real * f_real

    # validation

    def validate(self) -> "GradedPresentation":
        names = self.gen_names
        if len(set(names)) != len(names):
            raise PresentationError("duplicate generator names")
        if any(w <= 0 for w in self.weights):
            raise PresentationError("weights must be positive")
        if self.r < 2:
            raise PresentationError("need at least two generators")
        if len(self.relations) != self.r - 1:
            raise PresentationError("need one relation per generator except the last")
        if self.case_tag not in (CASE1, CASE2):
            raise PresentationError(f"unknown case tag {self.case_tag!r}")
        for n, f in self.invariants:
            if f.vars != names:
                raise PresentationError(f"invariant {n} is not in the generator variables")
            wn, wd = self.poly_weight(f.num), self.poly_weight(f.den)
            if f.num and (wn is None or wn != wd):
                raise PresentationError(f"invariant {n} does not have weight 0")
        if self.E.vars != self.inv_names:
            raise PresentationError("E must be a polynomial in the invariants")
        if self.e < 1:
            raise PresentationError("E must involve the last invariant")
        betas = beta_exponents(self.weights)
        for k, rel in enumerate(self.relations):
            if rel.beta != betas[k]:
                raise PresentationError(f"beta_{k + 1} = {rel.beta} is not minimal ({betas[k]})")
            if any(rel.xi[: k + 1]) or any(rel.lam[: k + 1]):
                raise PresentationError(f"xi_{k + 1}, lambda_{k + 1} must only involve later generators")
            if self.weight_of(rel.lam) - self.weight_of(rel.xi) != rel.beta * self.weights[k]:
                raise PresentationError(f"weights of relation {k + 1} do not balance")
            if rel.P.vars != self.inv_names or rel.Q.vars != self.inv_names:
                raise PresentationError(f"P_{k + 1}, Q_{k + 1} must be polynomials in the invariants")
            if rel.P.is_zero() or rel.Q.is_zero():
                raise PresentationError(f"P_{k + 1} and Q_{k + 1} must be nonzero")
            lhs = MPoly(names, {tuple(x + (rel.beta if i == k else 0) for i, x in enumerate(rel.xi)): 1})
            rhs = MPoly(names, {rel.lam: 1})
            if not self.fraction_identity(rel.P, rel.Q, lhs, rhs):
                raise PresentationError(f"relation {k + 1} does not hold")
        if self.case_tag == CASE1:
            self._check_case1()
        return self

    def _check_case1(self) -> None:
        r = self.r
        for k, rel in enumerate(self.relations):
            if any(rel.lam[: r - 1]):
                raise PresentationError(f"case 1 needs lambda_{k + 1} to be a power of the last generator")
            if any(rel.xi[: r - 2]) or rel.xi[r - 1]:
                raise PresentationError(f"case 1 needs xi_{k + 1} to be a power of generator {r - 1}")
            if rel.Q != 1:
                raise PresentationError(f"case 1 needs Q_{k + 1} = 1")
        if any(self.relations[-1].xi):
            raise PresentationError("case 1 needs the last xi to be 1")

    def is_case1(self) -> bool:
        try:
            self._check_case1()
        except PresentationError:
            return False
        return True

    # invariant-side helpers

    def j_poly(self, text: str) -> MPoly:
        return parse_poly(text, self.inv_names)

    def gen_poly(self, text: str) -> MPoly:
        return parse_poly(text, self.gen_names)

    def graded(self, text_or_poly, weight: int | None = None) -> "GradedPoly":
        p = self.gen_poly(text_or_poly) if isinstance(text_or_poly, str) else text_or_poly
        return GradedPoly(self, p, weight)

    def monomials_of_weight(self, w: int) -> list:
        """All exponent tuples of the generators with total weight w."""
        out = []
        ws = self.weights

        def rec(i, rest, acc):
            if i == len(ws) - 1:
                if rest % ws[i] == 0:
                    out.append(tuple(acc + [rest // ws[i]]))
                return
            for x in range(rest // ws[i] + 1):
                rec(i + 1, rest - x * ws[i], acc + [x])

        rec(0, w, [])
        return out

    # JSON

    def to_json(self) -> dict:
        names = self.gen_names
        out = {
            "schema": 1,
            "name": self.name,
            "generators": [{"name": n, "weight": w} for n, w in self.generators],
            "invariants": [
                {"name": n, "num": str(f.num), "den": str(f.den)} for n, f in self.invariants
            ],
            "relations": [
                {
                    "beta": rel.beta,
                    "xi": _monomial_str(rel.xi, names),
                    "lambda": _monomial_str(rel.lam, names),
                    "P": str(rel.P),
                    "Q": str(rel.Q),
                }
                for rel in self.relations
            ],
            "E": str(self.E),
            "case": self.case_tag,
        }
        if self.realization:
            out["realization"] = {
                "free": list(self.free_vars),
                "map": {k: str(v) for k, v in self.realization.items()},
            }
        return out

    @classmethod
    def from_json(cls, obj) -> "GradedPresentation":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            gens = tuple((g["name"], int(g["weight"])) for g in obj["generators"])
            names = tuple(n for n, _ in gens)
            invs = tuple(
                (i["name"], RatFrac(parse_poly(i["num"], names), parse_poly(i.get("den", "1"), names)))
                for i in obj["invariants"]
            )
            inv_names = tuple(n for n, _ in invs)
            rels = tuple(
                Relation(
                    int(r["beta"]),
                    _monomial_exps(r.get("xi", "1"), names),
                    _monomial_exps(r["lambda"], names),
                    parse_poly(r["P"], inv_names),
                    parse_poly(r.get("Q", "1"), inv_names),
                )
                for r in obj["relations"]
            )
            E = parse_poly(obj["E"], inv_names)
            free, real = (), {}
            if "realization" in obj:
                free = tuple(obj["realization"]["free"])
                real = {k: parse_poly(v, free) for k, v in obj["realization"]["map"].items()}
                for n in names:
                    if n not in real:
                        real[n] = MPoly.gen(n, free)
            pres = cls(obj.get("name", "custom"), gens, invs, rels, E, obj.get("case", CASE2), free, real)
        except (KeyError, TypeError, PolyError) as exc:
            raise PresentationError(f"malformed presentation: {exc}") from exc
        return pres.validate()


def _deg0(p: MPoly, v: str) -> int:
    d = p.degree(v)
    return 0 if d is NEG_INF else d


class GradedPoly:
    """A homogeneous polynomial in the generators of a presentation."""

    __slots__ = ("pres", "poly", "weight")

    def __init__(self, pres: GradedPresentation, poly: MPoly, weight: int | None = None):
        if poly.vars != pres.gen_names:
            raise PresentationError("polynomial is not in the generator variables")
        w = pres.poly_weight(poly)
        if poly and w is None:
            raise WeightMismatchError("polynomial is not homogeneous")
        if weight is None:
            if w is None:
                raise WeightMismatchError("the zero polynomial needs an explicit weight")
            weight = w
        elif poly and w != weight:
            raise WeightMismatchError(f"polynomial has weight {w}, not {weight}")
        self.pres = pres
        self.poly = poly
        self.weight = weight

    def __add__(self, other: "GradedPoly") -> "GradedPoly":
        if other.weight != self.weight:
            raise WeightMismatchError("cannot add forms of different weights")
        return GradedPoly(self.pres, self.poly + other.poly, self.weight)

    def __sub__(self, other: "GradedPoly") -> "GradedPoly":
        if other.weight != self.weight:
            raise WeightMismatchError("cannot subtract forms of different weights")
        return GradedPoly(self.pres, self.poly - other.poly, self.weight)

    def __mul__(self, other) -> "GradedPoly":
        if isinstance(other, GradedPoly):
            return GradedPoly(self.pres, self.poly * other.poly, self.weight + other.weight)
        return GradedPoly(self.pres, self.poly * other, self.weight)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "GradedPoly":
        return GradedPoly(self.pres, self.poly**k, self.weight * k)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GradedPoly)
            and other.weight == self.weight
            and other.poly == self.poly
        )

    def __repr__(self) -> str:
        return f"GradedPoly(weight={self.weight}, {self.poly})"


# symmetric geometric complexity


def sgc_case1(pres: GradedPresentation) -> Fraction:
    a = max(Fraction(pres.weight_of(rel.xi), rel.beta * w) for rel, w in zip(pres.relations, pres.weights))
    m = max(
        Fraction(rel.P.total_degree(), rel.beta * w + pres.weight_of(rel.xi))
        for rel, w in zip(pres.relations, pres.weights)
    )
    return (1 + a) * m


def sgc_case2(pres: GradedPresentation) -> Fraction:
    total = Fraction(0)
    prod = Fraction(1)
    for rel, w in zip(pres.relations, pres.weights):
        bw = rel.beta * w
        total += Fraction(max(rel.P.total_degree(), rel.Q.total_degree()), bw) * prod
        prod *= 1 + Fraction(pres.weight_of(rel.xi), bw)
    return total


def _as_rat(x: Fraction):
    return x.numerator if x.denominator == 1 else x


def sgc(pres: GradedPresentation, case: str | None = None):
    """Symmetric geometric complexity relative to the presentation's choices."""
    case = case or pres.case_tag
    if case == CASE1:
        if not pres.is_case1():
            raise PresentationError("presentation does not satisfy the case 1 conditions")
        return _as_rat(sgc_case1(pres))
    if case == CASE2:
        return _as_rat(sgc_case2(pres))
    raise PresentationError(f"unknown case {case!r}")


def gc_value(s, e: int, d_E: int):
    return _as_rat(Fraction((e + 2 * d_E)) * s + e - 1)


def gc(pres: GradedPresentation, case: str | None = None):
    """Geometric complexity (e + 2 d_E) SGC + e - 1."""
    return gc_value(sgc(pres, case), pres.e, pres.d_E)


# rewriting


def _check_pair(f: GradedPoly, g: GradedPoly) -> GradedPresentation:
    if f.pres is not g.pres and f.pres.to_json() != g.pres.to_json():
        raise PresentationError("f and g come from different presentations")
    if f.weight != g.weight:
        raise WeightMismatchError(f"weights {f.weight} and {g.weight} differ")
    if g.poly.is_zero():
        raise ZeroDivisionError("g is the zero form")
    return f.pres


class _PowerCache:
    def __init__(self):
        self.cache = {}

    def get(self, p: MPoly, k: int, key) -> MPoly:
        v = self.cache.get((key, k))
        if v is None:
            v = p**k
            self.cache[(key, k)] = v
        return v


def _smallest_s(z: int, wk: int, beta: int, modulus: int) -> int:
    for s in range(beta):
        if (z - s * wk) % modulus == 0:
            return s
    raise WeightMismatchError("weight is not representable by the generators")


def _case2_side(pres: GradedPresentation, poly: MPoly, w: int, powers: _PowerCache) -> MPoly:
    inv = pres.inv_names
    ws = pres.weights
    r = pres.r
    state = {e: MPoly.const(c, inv) for e, c in poly.terms.items()}
    z = w
    for k, rel in enumerate(pres.relations):
        g = reduce(gcd, ws[k + 1 :])
        s = _smallest_s(z, ws[k], rel.beta, g)
        a = z // (rel.beta * ws[k])
        new: dict = {}
        for e, c in state.items():
            alpha = e[k] - s
            if alpha < 0 or alpha % rel.beta:
                raise WeightMismatchError("monomial exponents inconsistent with the weight")
            t = alpha // rel.beta
            ee = tuple(
                0 if i == k else x + t * rel.lam[i] + (a - t) * rel.xi[i] for i, x in enumerate(e)
            )
            c = c * powers.get(rel.P, t, ("P", k)) * powers.get(rel.Q, a - t, ("Q", k))
            prev = new.get(ee)
            new[ee] = c if prev is None else prev + c
        state = new
        z = z - s * ws[k] + a * pres.weight_of(rel.xi)
    if z % ws[-1]:
        raise WeightMismatchError("leftover weight is not a multiple of the last weight")
    top = z // ws[-1]
    total = MPoly.zero(inv)
    for e, c in state.items():
        if any(e[: r - 1]) or e[-1] != top:
            raise WeightMismatchError("rewriting left generator powers behind")
        total = total + c
    return total


def _case1_side(pres: GradedPresentation, poly: MPoly, w: int, powers: _PowerCache) -> MPoly:
    inv = pres.inv_names
    ws = pres.weights
    r = pres.r
    rels = pres.relations
    g = gcd(ws[r - 2], ws[r - 1])
    s_head = None
    for cand in itertools.product(*[range(rel.beta) for rel in rels[: r - 2]]):
        if (w - sum(s * wk for s, wk in zip(cand, ws))) % g == 0:
            s_head = cand
            break
    if s_head is None:
        raise WeightMismatchError("weight is not representable by the generators")
    w1 = w - sum(s * wk for s, wk in zip(s_head, ws))
    a = max(Fraction(pres.weight_of(rel.xi), rel.beta * wk) for rel, wk in zip(rels, ws))
    mult = floor(a * w1 / ws[r - 2])
    wcur = w1 + mult * ws[r - 2]
    last = rels[r - 2]
    s_last = _smallest_s(wcur, ws[r - 2], last.beta, ws[r - 1])
    top = (wcur - s_last * ws[r - 2]) // ws[r - 1]
    total = MPoly.zero(inv)
    for e, coef in poly.terms.items():
        c = MPoly.const(coef, inv)
        e = list(e)
        e[r - 2] += mult
        for k in range(r - 2):
            alpha = e[k] - s_head[k]
            if alpha < 0 or alpha % rels[k].beta:
                raise WeightMismatchError("monomial exponents inconsistent with the weight")
            t = alpha // rels[k].beta
            e[k] = 0
            e[r - 2] -= t * rels[k].xi[r - 2]
            e[r - 1] += t * rels[k].lam[r - 1]
            c = c * powers.get(rels[k].P, t, ("P", k))
        if e[r - 2] < 0:
            raise WeightMismatchError("negative exponent after replacement")
        alpha = e[r - 2] - s_last
        if alpha < 0 or alpha % last.beta:
            raise WeightMismatchError("monomial exponents inconsistent with the weight")
        t = alpha // last.beta
        e[r - 1] += t * last.lam[r - 1]
        c = c * powers.get(last.P, t, ("P", r - 2))
        if e[r - 1] != top:
            raise WeightMismatchError("rewriting left generator powers behind")
        total = total + c
    return total


def rewrite_parts(f: GradedPoly, g: GradedPoly, case: str | None = None) -> tuple:
    """Numerator and denominator polynomials in the invariants, before normalization.

    The denominator is computed from g alone, so it is the same for every f.
    """
    pres = _check_pair(f, g)
    case = case or pres.case_tag
    if case == CASE1:
        if not pres.is_case1():
            raise PresentationError("presentation does not satisfy the case 1 conditions")
        side = _case1_side
    else:
        side = _case2_side
    powers = _PowerCache()
    return side(pres, f.poly, f.weight, powers), side(pres, g.poly, g.weight, powers)


def rewrite_case1(f: GradedPoly, g: GradedPoly) -> RatFrac:
    """Rewrite f/g in the invariants when lambda_k, xi_k are powers of the last two generators."""
    return RatFrac(*rewrite_parts(f, g, CASE1))


def rewrite_case2(f: GradedPoly, g: GradedPoly) -> RatFrac:
    """Rewrite f/g in the invariants by eliminating f_1, ..., f_{r-1} in turn."""
    return RatFrac(*rewrite_parts(f, g, CASE2))


def rewrite(f: GradedPoly, g: GradedPoly) -> RatFrac:
    return RatFrac(*rewrite_parts(f, g))


def degree_bound_for_weight(pres: GradedPresentation, w: int, case: str | None = None) -> int:
    """ceil(SGC * w) for the chosen case."""
    return ceil(Fraction(sgc(pres, case)) * w)


def verify_rewrite(result: RatFrac, f: GradedPoly, g: GradedPoly) -> bool:
    """Back-substitute the invariant definitions and compare with f/g exactly."""
    pres = f.pres
    if result.vars != pres.inv_names:
        return False
    return pres.fraction_identity(result.num, result.den, f.poly, g.poly)


# canonical form modulo E


def canonical_form(p: MPoly, q: MPoly, E: MPoly, var: str | None = None) -> RatFrac:
    """Fraction R, polynomial of degree < e in ``var``, with q R = p modulo E.

    ``var`` defaults to the last variable of E. The denominator of R only
    involves the other variables.
    """
    var = var or E.vars[-1]
    p._check(E.vars)
    q._check(E.vars)
    e = E.degree(var)
    if e is NEG_INF or e < 1:
        raise ValueError("E must have positive degree in the distinguished variable")
    u, _, z = bezout(q, E, var)
    if z.is_zero():
        raise ResultantZeroError("q shares a factor with E modulo the relation")
    num = u * p
    den = z
    coeffs_E = E.coeffs_in(var)
    lead = coeffs_E[-1]
    idx = E.vars.index(var)
    while True:
        dn = num.degree(var)
        if dn is NEG_INF or dn < e:
            break
        c = num.coeffs_in(var)[-1]
        shift = MPoly(E.vars, {tuple(dn - e if i == idx else 0 for i in range(E.nvars)): 1})
        num = num * lead - c * shift * E
        den = den * lead
    return RatFrac(num, den)


def canonical_form_residual(R: RatFrac, p: MPoly, q: MPoly, E: MPoly, var: str | None = None) -> MPoly:
    """Pseudo-remainder of q*num(R) - p*den(R) by E; zero iff R is correct."""
    var = var or E.vars[-1]
    return prem(q * R.num - p * R.den, E, var)


def canonical_degree(R: RatFrac, var: str) -> int:
    """Total degree of R in the variables other than ``var``."""
    dn = R.num.total_degree(exclude=[var])
    dd = R.den.total_degree(exclude=[var])
    return max(0 if dn is NEG_INF else dn, 0 if dd is NEG_INF else dd)


# builtin presentations


def _build(name, gens, invs, rels, E, case, free=(), real=None) -> GradedPresentation:
    names = tuple(n for n, _ in gens)
    inv_vars = tuple(n for n, _ in invs)
    invariants = tuple((n, parse_frac(t, names) if t != "1" else RatFrac(MPoly.const(1, names))) for n, t in invs)
    relations = tuple(
        Relation(b, _monomial_exps(xi, names), _monomial_exps(lam, names), parse_poly(P, inv_vars), parse_poly(Q, inv_vars))
        for b, xi, lam, P, Q in rels
    )
    realization = {}
    if real:
        realization = {n: parse_poly(real.get(n, n), free) for n in names}
    pres = GradedPresentation(name, tuple(gens), invariants, relations, parse_poly(E, inv_vars), case, tuple(free), realization)
    return pres.validate()


def igusa() -> GradedPresentation:
    """Siegel modular forms of genus 2 with the three Igusa invariants."""
    return _build(
        "igusa",
        [("I6p", 6), ("I12", 12), ("I4", 4), ("I10", 10)],
        [("J1", "I4*I6p/I10"), ("J2", "I4^2*I12/I10^2"), ("J3", "I4^5/I10^2"), ("J4", "1")],
        [
            (1, "I4", "I10", "J1", "1"),
            (1, "I4^2", "I10^2", "J2", "1"),
            (5, "1", "I10^2", "J3", "1"),
        ],
        "J4 - 1",
        CASE1,
    )


def gundlach_q5() -> GradedPresentation:
    """Symmetric Hilbert modular forms for Q(sqrt 5) with the Gundlach invariants."""
    return _build(
        "gundlach_q5",
        [("F6", 6), ("F2", 2), ("F10", 10)],
        [("J1", "F2^5/F10"), ("J2", "F2^2*F6/F10"), ("J3", "1")],
        [
            (1, "F2^2", "F10", "J2", "1"),
            (5, "1", "F10", "J1", "1"),
        ],
        "J3 - 1",
        CASE1,
    )


def elliptic() -> GradedPresentation:
    """Level-1 elliptic modular forms with the j-invariant; D stands for the discriminant form."""
    return _build(
        "elliptic",
        [("E6", 6), ("E4", 4), ("D", 12)],
        [("J1", "E4^3/D"), ("J2", "1")],
        [
            (2, "1", "D", "J1 - 1728", "1"),
            (3, "1", "D", "J1", "1"),
        ],
        "J2 - 1",
        CASE1,
        free=("E6", "E4"),
        real={"D": "(E4^3 - E6^2)/1728"},
    )


def synthetic_case2() -> GradedPresentation:
    """Small free presentation with a non-trivial Q_k, exercising the general algorithm."""
    return _build(
        "synthetic_case2",
        [("a", 3), ("b", 2), ("c", 4)],
        [("J1", "a^2/(b*c)"), ("J2", "b^2/c"), ("J3", "1")],
        [
            (2, "c", "b^5", "J1", "J2^2"),
            (2, "1", "c", "J2", "1"),
        ],
        "J3 - 1",
        CASE2,
    )


_BUILTINS = {"igusa": igusa, "gundlach_q5": gundlach_q5, "elliptic": elliptic}
_CACHE: dict = {}


def builtin_presentations() -> dict:
    if not _CACHE:
        _CACHE.update({k: f() for k, f in _BUILTINS.items()})
    return dict(_CACHE)


def get_presentation(name: str) -> GradedPresentation:
    if name == "synthetic_case2":
        return synthetic_case2()
    pres = builtin_presentations().get(name)
    if pres is None:
        raise KeyError(f"unknown presentation {name!r}; builtins are {sorted(_BUILTINS)}")
    return pres
