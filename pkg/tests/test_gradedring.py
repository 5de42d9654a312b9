import json
import random
from fractions import Fraction

import pytest

from helpers import random_form, random_pair
from modeq import qexp
from modeq.gradedring import (
    CASE1,
    CASE2,
    GradedPoly,
    GradedPresentation,
    PresentationError,
    ResultantZeroError,
    WeightMismatchError,
    beta_exponents,
    builtin_presentations,
    canonical_degree,
    canonical_form,
    canonical_form_residual,
    degree_bound_for_weight,
    elliptic,
    gc,
    gc_value,
    get_presentation,
    gundlach_q5,
    igusa,
    rewrite,
    rewrite_case1,
    rewrite_case2,
    rewrite_parts,
    sgc,
    synthetic_case2,
    verify_rewrite,
)
from modeq.polycore import NEG_INF, MPoly, RatFrac, parse_frac, parse_poly


def test_beta_exponents():
    assert beta_exponents([6, 12, 4, 10]) == [1, 1, 5]
    assert beta_exponents([6, 4, 12]) == [2, 3]
    assert beta_exponents([2, 2]) == [1]
    assert beta_exponents([6, 2, 10]) == [1, 5]


def test_complexities():
    assert sgc(igusa()) == Fraction(1, 6)
    assert sgc(gundlach_q5()) == Fraction(1, 6)
    assert sgc(elliptic()) == Fraction(1, 12)
    assert gc(igusa()) == Fraction(1, 6)
    assert gc(elliptic()) == Fraction(1, 12)
    assert gc_value(Fraction(1, 4), 2, 3) == 3


def test_case2_complexities():
    # telescoping sums, checked against a hand evaluation of each loop
    assert sgc(igusa(), CASE2) == Fraction(4, 9)
    assert sgc(gundlach_q5(), CASE2) == Fraction(1, 3)
    assert sgc(elliptic(), CASE2) == Fraction(1, 6)
    assert sgc(synthetic_case2()) == Fraction(3, 4)


def test_builtins_validate():
    pres = builtin_presentations()
    assert set(pres) == {"igusa", "gundlach_q5", "elliptic"}
    for p in pres.values():
        p.validate()
        assert p.case_tag == CASE1 and p.is_case1()
    assert get_presentation("synthetic_case2").case_tag == CASE2


def test_igusa_examples():
    g = igusa()
    J = g.inv_names
    f, h = g.graded("I4*I6p"), g.graded("I10")
    assert rewrite_case1(f, h) == parse_frac("J1", J)
    assert rewrite_case1(g.graded("I4^5"), g.graded("I10^2")) == parse_frac("J3", J)
    r = rewrite_case1(g.graded("I4^6*I6p"), g.graded("I10^3"))
    assert r == parse_frac("J1*J3", J)
    assert verify_rewrite(r, g.graded("I4^6*I6p"), g.graded("I10^3"))


def test_igusa_case2_agrees_with_case1():
    g = igusa()
    f, h = g.graded("I4*I6p"), g.graded("I10")
    assert rewrite_case2(f, h) == parse_frac("J1", g.inv_names)


def test_f_equals_g_gives_one():
    g = igusa()
    f = g.graded("I4^3 + 2*I12")
    assert rewrite(f, f) == parse_frac("1", g.inv_names)


def test_verify_rewrite_rejects_wrong_answer():
    g = igusa()
    f, h = g.graded("I4*I6p"), g.graded("I10")
    assert verify_rewrite(parse_frac("J1", g.inv_names), f, h)
    assert not verify_rewrite(parse_frac("J1+1", g.inv_names), f, h)


def test_weight_errors():
    g = igusa()
    with pytest.raises(WeightMismatchError):
        g.graded("I4 + I10")
    with pytest.raises(WeightMismatchError):
        rewrite(g.graded("I4"), g.graded("I10"))
    with pytest.raises(ZeroDivisionError):
        rewrite(g.graded("I10"), GradedPoly(g, MPoly.zero(g.gen_names), 10))


def test_case1_refused_on_case2_presentation():
    s = synthetic_case2()
    rng = random.Random(3)
    f, g = random_pair(s, rng, 20)
    with pytest.raises(PresentationError):
        rewrite_case1(f, g)


def test_graded_arithmetic_preserves_homogeneity():
    g = igusa()
    a, b = g.graded("I4^3 - I12"), g.graded("I12")
    assert (a + b).weight == 12 and (a * b).weight == 24 and (a**3).weight == 36
    with pytest.raises(WeightMismatchError):
        a + g.graded("I10")


@pytest.mark.parametrize("name", ["igusa", "gundlach_q5", "elliptic", "synthetic_case2"])
def test_random_rewrites(name):
    pres = get_presentation(name)
    rng = random.Random(hash(name) % 1000)
    for _ in range(25):
        f, g = random_pair(pres, rng, 40)
        r = rewrite(f, g)
        assert verify_rewrite(r, f, g)
        bound = degree_bound_for_weight(pres, f.weight)
        assert max(r.num.total_degree(), r.den.total_degree()) <= bound


def test_case2_path_on_case1_presentations():
    rng = random.Random(11)
    for pres in (igusa(), gundlach_q5(), elliptic()):
        for _ in range(10):
            f, g = random_pair(pres, rng, 40)
            r = rewrite_case2(f, g)
            assert verify_rewrite(r, f, g)
            assert max(r.num.total_degree(), r.den.total_degree()) <= degree_bound_for_weight(pres, f.weight, CASE2)


def test_denominator_depends_only_on_g():
    rng = random.Random(5)
    for pres in builtin_presentations().values():
        f1, g = random_pair(pres, rng, 48)
        f2 = random_form(pres, g.weight, rng)
        _, d1 = rewrite_parts(f1, g)
        _, d2 = rewrite_parts(f2, g)
        assert d1 == d2


def test_elliptic_relation_in_q_expansions():
    T = 30
    e4, e6, delta = qexp.eisenstein(4, T), qexp.eisenstein(6, T), qexp.delta_series(T)
    assert (e6 * e6).agrees_with(e4**3 - delta.scale(1728))


def test_presentation_json_roundtrip():
    for p in list(builtin_presentations().values()) + [synthetic_case2()]:
        doc = json.loads(json.dumps(p.to_json()))
        q = GradedPresentation.from_json(doc)
        assert q.to_json() == p.to_json()
        assert sgc(q) == sgc(p)


# canonical form


def test_canonical_form_examples():
    vs = ("J1", "J2")
    E = parse_poly("J2^2 - J1", vs)
    p = parse_poly("J1*J2 + 3", vs)
    assert canonical_form(p, parse_poly("1", vs), E) == RatFrac(p)
    assert canonical_form(parse_poly("J2^2", vs), parse_poly("1", vs), E) == parse_frac("J1", vs)
    assert canonical_form(parse_poly("1", vs), parse_poly("J2", vs), E) == parse_frac("J2/J1", vs)


def test_canonical_form_resultant_zero():
    vs = ("J1", "J2")
    with pytest.raises(ResultantZeroError):
        canonical_form(parse_poly("1", vs), parse_poly("J2^2 - J1", vs), parse_poly("J2^2 - J1", vs))


def test_canonical_form_random_small():
    rng = random.Random(2)
    vs = ("J1", "J2", "J3")
    from helpers import random_mpoly

    checked = 0
    while checked < 20:
        e = rng.randint(1, 3)
        E = random_mpoly(rng, vs[:2], 2, 3, 9).with_vars(vs) + MPoly.monomial((0, 0, e), vs, rng.randint(1, 3))
        p, q = random_mpoly(rng, vs, 3, 4, 9), random_mpoly(rng, vs, 3, 4, 9)
        if q.is_zero():
            continue
        try:
            R = canonical_form(p, q, E)
        except ResultantZeroError:
            continue
        assert canonical_form_residual(R, p, q, E).is_zero()
        d3 = R.num.degree("J3")
        assert d3 is NEG_INF or d3 <= e - 1
        assert R.den.degree("J3") in (0, NEG_INF)
        d = max(p.total_degree(), q.total_degree())
        assert canonical_degree(R, "J3") <= (e + 2 * E.total_degree(exclude=["J3"])) * d
        checked += 1
