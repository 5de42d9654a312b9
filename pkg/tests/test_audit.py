import io
import json
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_mpoly
from modeq import audit as au
from modeq import qexp
from modeq.heckefam import HeckeFamily
from modeq.polycore import DECLARED_COPRIME, MPoly, RatFrac, UndeclaredVariableError, parse_frac, parse_poly

XY = ("X", "Y")


def db(text, ell=2):
    return au.read_elliptic_db(io.StringIO(text), ell)


# elliptic text format


def test_symmetry_expansion():
    s = db("[1,0] 2\n[0,0] -3\n")
    assert au.set_to_phi(s) == parse_poly("2*X + 2*Y - 3", XY)


def test_comments_blank_lines_and_crlf():
    s = db("# header\r\n\r\n[1,1] 5  # diagonal\r\n[0,0] 1\r\n")
    assert au.set_to_phi(s) == parse_poly("5*X*Y + 1", XY)


def test_both_orders_agreeing_are_accepted():
    assert au.set_to_phi(db("[2,1] 4\n[1,2] 4\n")) == parse_poly("4*X^2*Y + 4*X*Y^2", XY)


def test_malformed_line_reports_line_number():
    with pytest.raises(au.ParseError) as err:
        db("[1 0] 2\n")
    assert err.value.line == 1
    with pytest.raises(au.ParseError) as err:
        db("[1,0] 2\n\n[0,0] x\n")
    assert err.value.line == 3


def test_symmetry_violation():
    with pytest.raises(au.SymmetryError) as err:
        db("[1,0] 2\n[0,1] 3\n")
    assert err.value.line == 2


def test_duplicate_entry():
    with pytest.raises(au.ParseError):
        db("[1,0] 2\n[1,0] 2\n")


@pytest.mark.parametrize("ell", [2, 3, 5])
def test_generated_phi_round_trips(ell, tmp_path):
    phi = qexp.phi_elliptic(ell)
    path = tmp_path / "phi.txt"
    path.write_text(au.serialize_elliptic_db(phi), encoding="utf-8")
    assert au.set_to_phi(au.parse_elliptic_db(str(path), ell)) == phi


# JSON format


def minimal_obj():
    return {
        "family": {"kind": "siegel", "level": 2},
        "variables": ["J1", "J2", "J3", "Y1"],
        "equations": [{"m": 1, "terms": [{"y_exps": [0], "num": "J1 + 1", "den": "J2"}]}],
    }


def test_minimal_json():
    s = au.modeq_from_json(minimal_obj())
    assert s.family == HeckeFamily.siegel(2)
    assert s.jvars == ("J1", "J2", "J3") and s.yvars == ("Y1",)
    coeffs = list(s.coefficients())
    assert len(coeffs) == 1
    assert coeffs[0][2] == parse_frac("(J1 + 1)/J2", s.jvars)


def test_json_errors():
    obj = minimal_obj()
    obj["equations"][0]["terms"][0]["den"] = "0"
    with pytest.raises(au.SchemaError):
        au.modeq_from_json(obj)
    obj = minimal_obj()
    obj["equations"][0]["terms"][0]["num"] = "J7 + 1"
    with pytest.raises(UndeclaredVariableError):
        au.modeq_from_json(obj)
    obj = minimal_obj()
    obj["equations"][0]["terms"][0]["y_exps"] = [0, 1]
    with pytest.raises(au.SchemaError):
        au.modeq_from_json(obj)
    obj = minimal_obj()
    del obj["family"]
    with pytest.raises(au.SchemaError):
        au.modeq_from_json(obj)
    with pytest.raises(au.SchemaError):
        au.modeq_from_json([])


def test_common_denominator_and_jlast():
    obj = {
        "family": {"kind": "hilbert", "level": [6, 1]},
        "variables": ["J1", "J2", "J3", "Y1", "Y2"],
        "jlast": "J3",
        "common_denominator": "J1 - 2",
        "equations": [
            {"m": 1, "terms": [{"y_exps": [2, 0], "jlast_exp": 1, "num": "J2"}]},
            {"m": 2, "terms": [{"y_exps": [0, 1], "num": "1"}]},
        ],
    }
    s = au.modeq_from_json(obj)
    assert s.jvars == ("J1", "J2") and s.jlast == "J3"
    f = s.equations[0].terms[((2, 0), 1)]
    assert f == parse_frac("J2/(J1 - 2)", s.jvars)
    assert au.modeq_from_json(json.loads(au.serialize(s))) == s


@st.composite
def equation_sets(draw):
    seed = draw(st.integers(0, 2**32))
    rng = random.Random(seed)
    jv = ("J1", "J2", "J3")
    nm = rng.randint(1, 3)
    yv = tuple(f"Y{i}" for i in range(1, nm + 1))
    eqs = []
    for m in range(1, nm + 1):
        terms = {}
        for _ in range(rng.randint(1, 4)):
            ye = tuple(rng.randint(0, 3) for _ in yv)
            den = MPoly.zero(jv)
            while den.is_zero():
                den = random_mpoly(rng, jv, 2, coeff=20)
            terms[(ye, 0)] = RatFrac(random_mpoly(rng, jv, 3, coeff=20), den, coprimality=DECLARED_COPRIME)
        eqs.append(au.Equation(m, terms))
    return au.ModularEquationSet(HeckeFamily.siegel(2), jv, yv, eqs)


@settings(max_examples=50, deadline=None)
@given(equation_sets())
def test_json_round_trip(s):
    assert au.modeq_from_json(json.loads(au.serialize(s))) == s


# coprimality sampling


def test_likely_coprime():
    vs = ("J1", "J2")
    assert au.likely_coprime(parse_frac("(J1 + J2)/(J1 - J2 + 1)", vs))
    shared = RatFrac(parse_poly("(J1 + J2)*(J1 - 3)", vs), parse_poly("(J1 + J2)*J2", vs), coprimality=DECLARED_COPRIME)
    assert not au.likely_coprime(shared)


# audits


@pytest.mark.parametrize("ell", [2, 3, 5])
def test_audit_generated_phi(ell):
    phi = qexp.phi_elliptic(ell)
    rep = au.audit(au.phi_to_set(phi, ell))
    assert rep.passed and rep.degree_pass and rep.y_degree_pass and rep.height_pass
    assert rep.max_degree[1] == ell + 1 == rep.degree_bounds[1]
    assert rep.y_degree[1] == (ell + 1, ell + 1)
    biggest = max(abs(c) for c in phi.terms.values())
    assert rep.max_height == pytest.approx(math.log(biggest), rel=1e-12)
    assert rep.max_height <= au.elliptic_envelope(ell)
    doc = rep.to_json()
    assert doc["schema"] == 1 and doc["passed"]


def test_audit_flags_degree_violation():
    phi = qexp.phi_elliptic(2) + parse_poly("X^4", XY)
    rep = au.audit(au.phi_to_set(phi, 2))
    assert not rep.degree_pass and not rep.passed
    assert "FAIL" in rep.text()


def test_audit_flags_height_violation():
    phi = qexp.phi_elliptic(2) + parse_poly("10^60", XY)
    rep = au.audit(au.phi_to_set(phi, 2))
    assert rep.degree_pass and rep.height_pass is False and not rep.passed


def test_audit_siegel_bound_columns():
    obj = minimal_obj()
    obj["variables"] = ["J1", "J2", "J3", "Y1", "Y2", "Y3"]
    obj["equations"] = [
        {"m": 1, "terms": [{"y_exps": [15, 0, 0], "num": "1"}, {"y_exps": [0, 0, 0], "num": "J1^20 + J2", "den": "J3^5"}]},
        {"m": 2, "terms": [{"y_exps": [0, 1, 0], "num": "1"}, {"y_exps": [0, 0, 0], "num": "J1^30"}]},
        {"m": 3, "terms": [{"y_exps": [0, 0, 1], "num": "1"}, {"y_exps": [1, 0, 0], "num": "J2^49", "den": "J1 + 1"}]},
    ]
    rep = au.audit(au.modeq_from_json(obj))
    assert rep.degree_bounds == {1: 25, 2: 50, 3: 50}
    assert rep.max_degree == {1: 20, 2: 30, 3: 49}
    assert rep.y_degree_pass and rep.passed
    assert rep.height_bound == pytest.approx(2.9528e16, rel=1e-3)


def test_audit_wrong_y_degree_fails():
    obj = minimal_obj()
    obj["equations"][0]["terms"].append({"y_exps": [3], "num": "1"})
    rep = au.audit(au.modeq_from_json(obj))
    assert rep.y_degree[1] == (3, 15) and not rep.passed


def test_audit_hilbert_has_no_height_bound():
    obj = {
        "family": {"kind": "hilbert", "level": [6, 1]},
        "variables": ["J1", "J2", "Y1"],
        "equations": [{"m": 1, "terms": [{"y_exps": [42], "num": "1"}, {"y_exps": [0], "num": "J1^3*J2"}]}],
    }
    rep = au.audit(au.modeq_from_json(obj))
    assert rep.height_bound is None and rep.height_pass is None and rep.passed
    assert au.NO_CONSTANT_NOTE in rep.notes


def test_paranoid_mode_warns_on_shared_factor():
    obj = minimal_obj()
    obj["equations"][0]["terms"][0] = {"y_exps": [0], "num": "(J1 + 1)*J3", "den": "(J1 + 1)*J2"}
    s = au.modeq_from_json(obj)
    assert all(e.warning is None for e in au.audit(s).entries)
    warned = [e for e in au.audit(s, paranoid=True).entries if e.warning]
    assert len(warned) == 1 and "share" in warned[0].warning


def test_threads_env(monkeypatch):
    monkeypatch.setenv("MODEQ_THREADS", "3")
    assert au._threads() == 3
    rep = au.audit(au.phi_to_set(qexp.phi_elliptic(3), 3))
    assert rep.passed
    monkeypatch.setenv("MODEQ_THREADS", "many")
    assert au._threads() == 1
