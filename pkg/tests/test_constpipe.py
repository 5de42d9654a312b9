import json
import math
from fractions import Fraction

import pytest

from modeq import constpipe as cp
from modeq.heckefam import HeckeFamily, UnsupportedFamilyError, is_prime


def rel(a, b):
    return abs(a - b) / abs(b)


def test_round_up_sig():
    assert cp.round_up_sig(1.3422e9) == 1.35e9
    assert cp.round_up_sig(2.1931) == 2.2
    assert cp.round_up_sig(1.08e11 * (1 + 1e-15)) == 1.08e11
    assert cp.round_up_sig(1.0801e11) == 1.09e11


def test_degree_bounds():
    s2 = HeckeFamily.siegel(2)
    assert cp.degree_bound(s2, 1).bound == 25
    assert cp.degree_bound(s2, 2).bound == 50 and cp.degree_bound(s2, 3).bound == 50
    assert cp.degree_bound(s2, 1).coefficient == Fraction(5, 3)
    assert cp.degree_bound(s2, 3).coefficient == Fraction(10, 3)
    h = HeckeFamily.hilbert(6, 1)
    assert cp.degree_bound(h, 1).bound == 140 and cp.degree_bound(h, 2).bound == 140
    for ell in filter(is_prime, range(2, 98)):
        assert cp.degree_bound(HeckeFamily.elliptic(ell)).bound == ell + 1


def test_bounds_are_ceilings():
    # 5/3 * 40 = 66.67 for Siegel ell = 3
    b = cp.degree_bound(HeckeFamily.siegel(3), 1)
    assert b.hecke_degree == 40 and b.bound == 67


def test_theta_faltings_constant():
    assert cp.theta_faltings_constant(1, 2) == pytest.approx(1000 * 4 * math.log(4) ** 5, rel=1e-12)
    c = cp.theta_faltings_constant(2, 4)
    assert 1.34e9 < c <= 1.35e9
    values = [cp.theta_faltings_constant(2, r) for r in (2, 4, 6, 8, 10)]
    assert values == sorted(values)


def test_height_chain():
    L = cp.siegel_height_chain()
    assert L.used("j_mult") == 8000
    # 40 * 2 * 1.35e9 is exactly 1.08e11; only float noise separates them
    assert L["j_log_coeff"].value == pytest.approx(1.08e11, rel=1e-12)
    assert L["j_additive"].value <= 1.67e12 and rel(L["j_additive"].value, 1.67e12) < 0.01
    assert L.used("isogeny_log_coeff") == 20
    for name in ("theta_to_j_mult", "theta_to_j_add", "j_to_theta_mult", "j_to_theta_add"):
        assert L[name].provenance == cp.LITERATURE


def test_evaluation_constant_and_log_constant():
    L = cp.siegel_height_chain()
    c = cp.evaluation_height_constant(L)
    assert 3.3e12 <= c <= 3.35e12
    assert 2.19 < cp.c_log_siegel() <= 2.2


def test_evaluation_data_constants():
    c1, c2, c3, cmax = cp.evaluation_data_constants(Fraction(10, 3), 3.35e12, 2.2, 15, 1)
    assert cmax == c1 and cmax <= 1.36e17 and rel(cmax, 1.353e17) < 1e-3
    assert c2 == pytest.approx(230.5555, rel=1e-6)
    assert cp.evaluation_data_constants(1, 1, 1, 1, 1)[2] == pytest.approx(4)
    with pytest.raises(ValueError):
        cp.evaluation_data_constants(0, 1, 1, 1)


def test_fraction_height_constant():
    c = cp.fraction_height_constant(3.35e12, 960, Fraction(10, 3), 2.2, 1.36e17, 3)
    assert c <= 1.42e15 and rel(c, 1.42e15) < 0.01
    doubled = cp.fraction_height_constant(6.7e12, 960, Fraction(10, 3), 2.2, 1.36e17, 3)
    assert rel(doubled / c, 2.0) < 0.05


def test_stepwise_constant_matches_closed_form():
    args = (3.35e12, 960, 10 / 3, 2.2, 1.36e17)
    assert rel(cp.fraction_height_constant_stepwise(*args, 3), cp.fraction_height_constant(*args, 3)) < 1e-12


@pytest.mark.parametrize("index", range(5))
def test_constants_monotone_in_inputs(index):
    base = [3.35e12, 960, 10 / 3, 2.2, 1.36e17]
    bumped = list(base)
    bumped[index] *= 1.01
    assert cp.fraction_height_constant(*bumped, 3) >= cp.fraction_height_constant(*base, 3)
    e_base = [10 / 3, 3.35e12, 2.2, 15]
    if index < 4:
        e_bumped = list(e_base)
        e_bumped[index] *= 1.01
        assert cp.evaluation_data_constants(*e_bumped)[3] >= cp.evaluation_data_constants(*e_base)[3]


def test_auxiliary_equation_degree():
    a = cp.auxiliary_equation_degree(HeckeFamily.siegel(2))
    assert a.coefficient == Fraction(7, 3) and a.c_aux == 15 and a.valid
    assert a.lambda_weight == 214
    with pytest.raises(UnsupportedFamilyError):
        cp.auxiliary_equation_degree(HeckeFamily.elliptic(5))


def test_ledger_values_and_provenance():
    L = cp.build_ledger()
    targets = {
        "C_theta_faltings(2,4)": 1.35e9,
        "C_eval": 3.35e12,
        "C_log": 2.2,
        "C_evaldata": 1.36e17,
        "C_height": 1.42e15,
        "siegel_final_coeff": 5.68e15,
    }
    for name, published in targets.items():
        e = L[name]
        assert e.value <= published and rel(e.value, published) < 0.01, name
        assert e.used == published, name
    doc = json.loads(L.dumps())
    assert doc["schema"] == 1
    for entry in doc["entries"]:
        assert entry.get("formula") or entry.get("citation"), entry["name"]
        assert entry["provenance"] in (cp.COMPUTED, cp.LITERATURE)


def test_bound_reports():
    rep = cp.bound_report(HeckeFamily.siegel(2)).to_json()
    assert rep["schema"] == 1
    assert [b["bound"] for b in rep["degree_bounds"]] == [25, 50, 50]
    h, published = cp.siegel_height_bound(HeckeFamily.siegel(2))
    assert rep["height_bound"] == h and h > 0
    assert published == pytest.approx(5.68e15 * 8 * math.log(2), rel=1e-12)
    hil = cp.bound_report(HeckeFamily.hilbert(6, 1)).to_json()
    assert hil["height_bound"] is None
    with pytest.raises(UnsupportedFamilyError):
        cp.siegel_height_bound(HeckeFamily.hilbert(6, 1))
