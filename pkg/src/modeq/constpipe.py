"""Explicit degree and height constants.

Degree bounds come out exact: the geometric complexity of the invariants
times the weight of the denominator form, divided by the Hecke degree.

Height constants for Siegel modular equations in Igusa invariants are built
as a chain. Each stage gets a raw value, computed in double precision and
nudged upward, and a *rounded* value: the raw value rounded up to three
significant digits. The next stage consumes the rounded value, so every
stage is still a valid upper bound. The constants of the Mestre/Thomae step
(40, 12, 200, 1000) are inputs, not recomputed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from decimal import ROUND_CEILING, Decimal
from fractions import Fraction
from math import ceil

from . import gradedring
from .heckefam import (
    SIEGEL,
    HeckeFamily,
    UnsupportedFamilyError,
    check_m,
    denominator_weight,
    hecke_degree,
    isogeny_degree,
)
from .heightlab import up

COMPUTED = "computed"
LITERATURE = "literature_input"


def round_up_sig(x: float, digits: int = 3) -> float:
    """Smallest number with ``digits`` significant digits that is >= x.

    Float noise below one part in 10^12 is ignored so that, say, 80 * 1.35e9
    stays 1.08e11 instead of jumping to 1.09e11.
    """
    if x <= 0:
        return x
    exp = math.floor(math.log10(x)) - digits + 1
    scaled = x / 10.0**exp
    near = round(scaled)
    if abs(scaled - near) <= 1e-12 * scaled:
        scaled = near
    q = Decimal(repr(scaled)).to_integral_value(rounding=ROUND_CEILING)
    return float(q.scaleb(exp))


# degree bounds


@dataclass(frozen=True)
class DegreeBound:
    family: HeckeFamily
    m: int
    coefficient: Fraction  # multiply by the Hecke degree
    hecke_degree: int
    bound: int

    def to_json(self) -> dict:
        return {
            "family": self.family.to_json(),
            "m": self.m,
            "coefficient": str(self.coefficient),
            "hecke_degree": self.hecke_degree,
            "bound": self.bound,
        }


def degree_coefficient(fam: HeckeFamily, m: int) -> Fraction:
    """GC * (#Sigma) * sum wt(chi_i), expressed per unit of Hecke degree."""
    check_m(fam, m)
    pres = gradedring.get_presentation(fam.presentation_name)
    d = hecke_degree(fam)
    return Fraction(gradedring.gc(pres)) * Fraction(denominator_weight(fam, m), d)


def degree_bound(fam: HeckeFamily, m: int = 1) -> DegreeBound:
    coef = degree_coefficient(fam, m)
    d = hecke_degree(fam)
    return DegreeBound(fam, m, coef, d, ceil(coef * d))


# constants of the height chain


def theta_faltings_constant(g: int, r: int) -> float:
    """1000 r^(2g) log^5(r^(2g)), the Theta/Faltings comparison constant."""
    if g < 1 or r < 2 or r % 2:
        raise ValueError("need g >= 1 and r >= 2 even")
    n = r ** (2 * g)
    return up(1000 * n * math.log(n) ** 5)


@dataclass(frozen=True)
class LedgerEntry:
    name: str
    value: float
    provenance: str
    source: str  # formula for computed entries, citation for inputs
    rounded: float | None = None

    @property
    def used(self) -> float:
        """Value consumed by later stages."""
        return self.value if self.rounded is None else self.rounded

    def to_json(self) -> dict:
        out = {"name": self.name, "value": self.value, "provenance": self.provenance}
        out["formula" if self.provenance == COMPUTED else "citation"] = self.source
        if self.rounded is not None:
            out["rounded"] = self.rounded
        return out


@dataclass
class HeightConstantLedger:
    entries: dict = field(default_factory=dict)

    def add(self, name, value, provenance, source, rounded=False) -> LedgerEntry:
        if name in self.entries:
            raise KeyError(f"duplicate ledger entry {name}")
        r = round_up_sig(value) if rounded else None
        entry = LedgerEntry(name, float(value), provenance, source, r)
        self.entries[name] = entry
        return entry

    def __getitem__(self, name) -> LedgerEntry:
        return self.entries[name]

    def used(self, name) -> float:
        return self.entries[name].used

    def to_json(self) -> dict:
        return {"schema": 1, "entries": [e.to_json() for e in self.entries.values()]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


_MESTRE = "Mestre's algorithm with Thomae's formulae (genus-2 j-heights vs level-4 Theta heights)"


def siegel_height_chain(ledger: HeightConstantLedger | None = None) -> HeightConstantLedger:
    """Isogeny height inequality for abelian surfaces, with every constant traced."""
    L = ledger if ledger is not None else HeightConstantLedger()
    L.add("theta_to_j_mult", 40, LITERATURE, _MESTRE + ": h_j <= 40 h_theta + 12")
    L.add("theta_to_j_add", 12, LITERATURE, _MESTRE + ": h_j <= 40 h_theta + 12")
    L.add("j_to_theta_mult", 200, LITERATURE, _MESTRE + ": h_theta <= 200 h_j + 1000")
    L.add("j_to_theta_add", 1000, LITERATURE, _MESTRE + ": h_theta <= 200 h_j + 1000")
    L.add(
        "isogeny_faltings_coeff",
        0.5,
        LITERATURE,
        "Faltings height changes by at most half the log of the isogeny degree",
    )
    C = L.add(
        "C_theta_faltings(2,4)",
        theta_faltings_constant(2, 4),
        COMPUTED,
        "1000 r^(2g) log^5(r^(2g)) at g=2, r=4",
        rounded=True,
    ).used
    L.add(
        "j_mult",
        L.used("theta_to_j_mult") * L.used("j_to_theta_mult"),
        COMPUTED,
        "40 * 200",
    )
    L.add("j_log_coeff", up(80 * C), COMPUTED, "40 * 2 * C(2,4)", rounded=True)
    log1202 = math.log(1202)
    theta_add = up(C * log1202 + C * math.log(402 + 2 * C * log1202 + C))
    L.add(
        "theta_additive",
        theta_add,
        COMPUTED,
        "C(2,4) log 1202 + C(2,4) log(402 + 2 C(2,4) log 1202 + C(2,4))",
        rounded=True,
    )
    L.add(
        "j_additive",
        up(L.used("theta_to_j_mult") * L.used("theta_additive") + L.used("theta_to_j_add")),
        COMPUTED,
        "40 * theta_additive + 12",
        rounded=True,
    )
    L.add(
        "isogeny_log_coeff",
        L.used("theta_to_j_mult") * 2 * (L.used("isogeny_faltings_coeff") / 2),
        COMPUTED,
        "40 * 2 * (1/2 * 1/2): half the Faltings change, counted twice, scaled by 40",
    )
    return L


def evaluation_height_constant(L: HeightConstantLedger) -> float:
    """Evaluated equations: h <= 2d(8000 H + c_log_coeff log H + c_add + 40 log ell).

    Dividing by d (H + log l) with l = ell^2 and H >= 1, the supremum is at
    H = 1 and l = 1.
    """
    mult = L.used("j_mult")
    add = L.used("j_additive")
    logc = L.used("j_log_coeff")
    # (mult H + logc log H + add)/H decreases on H >= 1 once add >= logc
    if add < logc:
        raise ValueError("chain constants outside the monotone regime")
    value = up(2 * (mult + add))
    L.add(
        "C_eval",
        value,
        COMPUTED,
        "2 (8000 + j_additive): sup over H >= 1 of 2(8000 H + j_log_coeff log H + j_additive + 20 log l)/(H + log l)",
        rounded=True,
    )
    return L.used("C_eval")


def c_log_siegel() -> float:
    """log d <= (3/2 + log 2) max(1, log l) using d <= 2 ell^3 and l = ell^2."""
    return up(1.5 + math.log(2))


def evaluation_data_constants(c_deg, c_eval, c_log, c_aux, field_degree: int = 1) -> tuple:
    """Constants making evaluation data valid for the Siegel instantiation: (C1, C2, C3, max)."""
    c_deg, c_eval, c_log, c_aux = (float(x) for x in (c_deg, c_eval, c_log, c_aux))
    if min(c_deg, c_eval, c_log, c_aux, field_degree) <= 0:
        raise ValueError("all inputs must be positive")
    k = 24 * c_deg**3 * c_eval
    c1 = up(k * (4 * c_log + math.log(k) + 1))
    c2 = up(14 * c_deg**2 + 5 * c_aux)
    c3 = up(4 * c_deg * field_degree)
    return c1, c2, c3, max(c1, c2, c3)


def c_double_prime(c_evaldata: float, c_log: float) -> float:
    return up(3 + math.log(2 * c_evaldata) + 4 * c_log)


def fraction_height_constant(c_eval, c_frac, c_deg, c_log, c_evaldata, n: int) -> float:
    """Height constant for fractions rebuilt from evaluations, in closed form."""
    cpp = c_double_prime(c_evaldata, c_log)
    inner = (
        2 * c_eval * (1 + cpp)
        + 2 * c_frac * c_deg * (math.log(4 * c_deg * c_eval) + 2 * c_log + 1 + cpp)
        + 4 * c_deg * (math.log(c_deg) + c_log)
        + 2 * c_deg * (math.log(2) + cpp)
        + 2 * math.log(2 * c_deg)
        + 2
    )
    return up(2 ** (n - 1) * inner)


def c_prime(c_eval, c_frac, c_deg, c_log, c_evaldata) -> float:
    """Height constant for the reconstruction along a single line."""
    cpp = c_double_prime(c_evaldata, c_log)
    return up(
        2 * c_eval * (1 + cpp)
        + 2 * c_frac * c_deg * (math.log(4 * c_deg * c_eval) + 2 * c_log + 1 + cpp)
        + c_deg * (math.log(2) + cpp)
        + math.log(2 * c_deg)
        + 1
    )


def fraction_height_constant_stepwise(c_eval, c_frac, c_deg, c_log, c_evaldata, n: int) -> float:
    """The same constant assembled from the single-line constant c_prime."""
    cpp = c_double_prime(c_evaldata, c_log)
    cp = c_prime(c_eval, c_frac, c_deg, c_log, c_evaldata)
    return up(
        2 ** (n - 1)
        * (cp + 4 * c_deg * (math.log(c_deg) + c_log) + c_deg * (math.log(2) + cpp) + math.log(2 * c_deg) + 1)
    )


@dataclass(frozen=True)
class AuxEquationDegree:
    coefficient: Fraction  # degree of the auxiliary fraction is coefficient * (d + 1)
    lambda_weight: int  # weight of lambda^delta
    c_aux: int
    valid: bool


def auxiliary_equation_degree(fam: HeckeFamily) -> AuxEquationDegree:
    """Degree data for the auxiliary equation, instantiated for Igusa invariants only.

    With lambda = I4 and lambda' = I4 I10 the weight of lambda^delta is
    14 d + 4 and the rewritten fraction has degree at most (7/3)(d + 1),
    which is below 15 d whenever d >= 15.
    """
    if fam.kind != SIEGEL:
        raise UnsupportedFamilyError(f"auxiliary equation constants are only instantiated for Siegel, not {fam.kind}")
    d = hecke_degree(fam)
    pres = gradedring.get_presentation("igusa")
    coef = Fraction(gradedring.sgc(pres)) * 14
    valid = d >= 15 and coef * (d + 1) <= 15 * d
    return AuxEquationDegree(coef, 14 * d + 4, 15, valid)


def build_ledger() -> HeightConstantLedger:
    """The full Siegel ledger, from the Theta/Faltings constant to the final coefficient."""
    L = siegel_height_chain()
    c_eval = evaluation_height_constant(L)
    c_log = L.add("C_log", c_log_siegel(), COMPUTED, "3/2 + log 2", rounded=True).used
    c_frac = L.add("C_frac", 960, LITERATURE, "fraction interpolation constant over Q").used
    c_deg = L.add(
        "C_deg",
        float(degree_coefficient(HeckeFamily.siegel(2), 2)),
        COMPUTED,
        "GC(igusa) * 20: largest per-degree coefficient over m = 1..3",
    ).used
    c_aux = L.add(
        "C_aux_degree",
        auxiliary_equation_degree(HeckeFamily.siegel(2)).c_aux,
        COMPUTED,
        "auxiliary equation degree (7/3)(d+1) <= 15 d for d >= 15",
    ).used
    c1, c2, c3, cmax = evaluation_data_constants(c_deg, c_eval, c_log, c_aux, 1)
    L.add("C_evaldata_C1", c1, COMPUTED, "24 Cd^3 Ce (4 Clog + log(24 Cd^3 Ce) + 1)")
    L.add("C_evaldata_C2", c2, COMPUTED, "14 Cd^2 + 5 C_aux_degree")
    L.add("C_evaldata_C3", c3, COMPUTED, "4 Cd [L:Q]")
    c_ed = L.add("C_evaldata", cmax, COMPUTED, "max(C1, C2, C3)", rounded=True).used
    L.add("C_double_prime", c_double_prime(c_ed, c_log), COMPUTED, "3 + log(2 C_evaldata) + 4 C_log")
    L.add(
        "C_prime",
        c_prime(c_eval, c_frac, c_deg, c_log, c_ed),
        COMPUTED,
        "single-line constant: 2Ce(1+C'') + 2Cf Cd(log(4 Cd Ce) + 2Clog + 1 + C'') + Cd(log 2 + C'') + log(2Cd) + 1",
    )
    L.add(
        "C_height_stepwise",
        fraction_height_constant_stepwise(c_eval, c_frac, c_deg, c_log, c_ed, 3),
        COMPUTED,
        "2^(n-1)(C' + 4Cd(log Cd + Clog) + Cd(log 2 + C'') + log(2Cd) + 1), n = 3",
    )
    L.add(
        "C_height",
        fraction_height_constant(c_eval, c_frac, c_deg, c_log, c_ed, 3),
        COMPUTED,
        "2^(n-1)(2Ce(1+C'') + 2Cf Cd(log(4 Cd Ce) + 2Clog + 1 + C'') + 4Cd(log Cd + Clog) + 2Cd(log 2 + C'') + 2 log(2Cd) + 2), n = 3",
        rounded=True,
    )
    L.add(
        "siegel_final_coeff",
        up(4 * L["C_height"].value),
        COMPUTED,
        "C_height * 2 * 2: d <= 2 ell^3 and max(1, log ell^2) <= 2 log ell",
        rounded=True,
    )
    return L


# reports


@dataclass(frozen=True)
class BoundReport:
    family: HeckeFamily
    degree_bounds: tuple  # DegreeBound per m
    height_bound: float | None
    height_bound_published: float | None
    ledger: dict

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "family": self.family.to_json(),
            "hecke_degree": hecke_degree(self.family),
            "isogeny_degree": isogeny_degree(self.family),
            "degree_bounds": [b.to_json() for b in self.degree_bounds],
            "height_bound": self.height_bound,
            "height_bound_published_form": self.height_bound_published,
            "ledger": self.ledger,
        }


def siegel_height_bound(fam: HeckeFamily, ledger: HeightConstantLedger | None = None) -> tuple:
    """(C d max(1, log l), 5.68e15-style ell^3 log ell form) for a Siegel family."""
    if fam.kind != SIEGEL:
        raise UnsupportedFamilyError("explicit height constants exist for the Siegel family only")
    L = ledger or build_ledger()
    d = hecke_degree(fam)
    lg = max(1.0, math.log(isogeny_degree(fam)))
    ell = fam.level
    return up(L.used("C_height") * d * lg), up(L.used("siegel_final_coeff") * ell**3 * math.log(ell))


def bound_report(fam: HeckeFamily) -> BoundReport:
    bounds = tuple(degree_bound(fam, m) for m in range(1, fam.n_invariants + 1))
    if fam.kind == SIEGEL:
        L = build_ledger()
        h, hp = siegel_height_bound(fam, L)
        snap = L.to_json()
    else:
        h = hp = None
        snap = {}
    return BoundReport(fam, bounds, h, hp, snap)
