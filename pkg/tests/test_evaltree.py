import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from helpers import random_fraction
from modeq import evaltree as et
from modeq.polycore import MPoly, RatFrac, parse_frac, parse_poly


# tree construction


def test_single_level_avoids_zero():
    data = et.build_tree(1, 1, 50, avoid=[parse_poly("Y1", ("Y1",))])
    sons = data.tree.sons(())
    assert 0 not in sons and len(sons) == 4


def test_two_levels_avoid_one():
    data = et.build_tree(2, 2, 100, avoid=[parse_poly("Y1 - 1", ("Y1", "Y2"))])
    level1 = data.tree.sons(())
    assert 1 not in level1 and len(level1) == 4
    assert max(level1) - min(level1) <= 8
    assert level1 == (0, 2, 3, 4)


def test_base_point_avoids_denominator():
    data = et.build_tree(1, 1, 50, den=parse_poly("J1", ("J1",)))
    assert data.a[0] != 0
    den = parse_poly("J1*J2 - J2", ("J1", "J2"))
    data = et.build_tree(2, 1, 50, den=den)
    assert data.a == (0, 1) and den.eval(data.a) != 0


def test_exhausted_search_names_level():
    # every value in the first window is a zero of the avoid product at level 1
    avoid = MPoly.const(1, ("Y1", "Y2"))
    for c in range(0, 5):
        avoid = avoid * parse_poly(f"Y1 - {c}", ("Y1", "Y2"))
    with pytest.raises(et.ExhaustedSearchError) as err:
        et.build_tree(2, 1, 4, avoid=[avoid])
    assert err.value.level == 1
    with pytest.raises(et.ExhaustedSearchError) as err:
        et.build_tree(1, 3, 2)
    assert err.value.level == 1


def test_strict_mode_arity_and_magnitude():
    data = et.build_tree(2, 1, 12, strict=True, B=2)
    t = data.tree
    assert t.N2 == 12 and t.D2 >= 24
    assert data.conditions["magnitude"] == "satisfied"
    assert et.build_tree(1, 1, 12, strict=True, B=100).conditions["magnitude"] == "violated"
    assert et.build_tree(1, 1, 12).conditions["magnitude"] == "waived"


def test_check_rejects_broken_trees():
    good = et.build_tree(2, 1, 30).tree
    bad = et.EvalTree(good.n, good.N1, good.N2, {**good.children, (): (0, 0)}, good.D1, good.D2, good.M)
    with pytest.raises(ValueError):
        bad.check()
    bad = et.EvalTree(good.n, good.N1, good.N2, good.children, good.D1, good.D2, 1)
    with pytest.raises(ValueError):
        bad.check()


linear_avoid = st.lists(
    st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-20, 20)).filter(lambda t: t[0] or t[1]),
    min_size=0,
    max_size=4,
)


@settings(max_examples=60, suppress_health_check=[HealthCheck.too_slow])
@given(linear_avoid, st.integers(1, 3))
def test_tree_structure_over_random_avoid_sets(forms, d):
    vs = ("Y1", "Y2", "Y3")
    avoid = [MPoly(vs, {(1, 0, 0): a, (0, 1, 0): b, (0, 0, 0): c}) for a, b, c in forms]
    data = et.build_tree(3, d, 400, avoid=avoid)
    t = data.tree
    t.check()
    for depth in range(3):
        for path in t.paths(depth):
            sons = t.sons(path)
            assert len(set(sons)) == len(sons)
            assert len(sons) == (2 * d if depth < 2 else 2 * d + 2)
    for path in t.paths(3):
        for p in avoid:
            # a leaf lies on no zero locus of a restriction of an avoid polynomial
            assert p.eval(path) != 0 or p.subs_values({"Y1": path[0]}).is_zero()
    for level, excluded, budget in data.exclusions:
        assert excluded <= budget


@settings(max_examples=40, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 2**32))
def test_exclusions_within_degree_budget(seed):
    rng = random.Random(seed)
    vs = ("Y1", "Y2")
    avoid = []
    for _ in range(rng.randint(1, 3)):
        p = MPoly.zero(vs)
        while p.is_zero():
            p = MPoly(vs, {(rng.randint(0, 2), rng.randint(0, 2)): rng.randint(-3, 3) for _ in range(3)})
        avoid.append(p)
    try:
        data = et.build_tree(2, 2, 300, avoid=avoid)
    except et.ExhaustedSearchError:
        # an avoid polynomial free of Y2 can kill whole lines; the scan then reports it
        return
    for level, excluded, budget in data.exclusions:
        assert excluded <= budget


# line restriction and univariate reconstruction


def test_line_restrict_examples():
    f = parse_frac("J1/J2", ("J1", "J2"))
    assert et.line_restrict(f, (2,), (0, 0)) == parse_frac("2", ("Y",))
    assert et.line_restrict(parse_frac("J1", ("J1", "J2")), (1,), (3, 0)) == parse_frac("Y + 3", ("Y",))
    assert et.line_restrict(parse_frac("5", ("J1", "J2")), (4,), (1, 1)) == parse_frac("5", ("Y",))


def test_cauchy_interpolate_examples():
    pts = [(x, Fraction(1, x - 1)) for x in (2, 3, 4, 5)]
    r = et.cauchy_interpolate(pts, 0, 1, norm_at=0)
    assert r == parse_frac("1/(Y - 1)", ("Y",))
    pts = [(x, Fraction(x * x - 3)) for x in range(5)]
    assert et.cauchy_interpolate(pts, 3, 0) == parse_frac("Y^2 - 3", ("Y",))
    with pytest.raises(et.NoSolutionError):
        et.cauchy_interpolate([(0, 1), (1, 2)], 0, 0)
    with pytest.raises(ValueError):
        et.cauchy_interpolate([(0, 1), (0, 1)], 0, 0)


def test_cauchy_normalization_and_pole():
    pts = [(x, Fraction(x + 1, x - 3)) for x in (0, 1, 2, 4, 5)]
    p, q = et.cauchy_interpolate(pts, 1, 1, norm_at=1, var=None)
    assert sum(c for c in q) == 1  # q(1) = 1
    with pytest.raises(et.PoleError):
        et.cauchy_interpolate(pts, 1, 1, norm_at=3)


@settings(max_examples=100)
@given(
    st.lists(st.integers(-9, 9), min_size=1, max_size=4),
    st.lists(st.integers(-9, 9), min_size=1, max_size=4).filter(lambda c: c[0]),
)
def test_cauchy_round_trip(num, den):
    f = RatFrac(MPoly(("Y",), {(k,): c for k, c in enumerate(num)}), MPoly(("Y",), {(k,): c for k, c in enumerate(den)}))
    xs = [x for x in range(1, 40) if f.den.eval((x,)) != 0][: len(num) + len(den) + 2]
    pts = [(x, f.eval((x,))) for x in xs]
    assert et.cauchy_interpolate(pts, len(num) - 1, len(den) - 1) == f


# multivariate reconstruction


@pytest.mark.parametrize(
    "text, n, d",
    [
        ("(J1 + J2)/(J1*J2 - 1)", 2, 2),
        ("5", 1, 1),
        ("5", 2, 1),
        ("J1^2*J3/(J2 + 7)", 3, 3),
    ],
)
def test_reconstruct_examples(text, n, d):
    vs = tuple(f"J{i}" for i in range(1, n + 1))
    f = parse_frac(text, vs)
    r, data = et.reconstruct(et.fraction_oracle(f), n, d, 10_000, den=f.den, variables=vs)
    assert r == f
    assert data.conditions["base_point_nonvanishing"]


def test_reconstruct_fraction_on_built_tree():
    vs = ("J1", "J2")
    f = parse_frac("(J1 + J2)/(J1*J2 - 1)", vs)
    data = et.build_tree(2, 2, 1000, den=f.den, N2=6)
    assert et.reconstruct_fraction(et.fraction_oracle(f), 2, 2, data, variables=vs) == f


@pytest.mark.parametrize("seed", range(5))
def test_round_trip_random_fractions(seed):
    rng = random.Random(seed)
    for _ in range(10):
        n, d = rng.randint(1, 3), rng.randint(1, 4)
        f = random_fraction(rng, n, d)
        r, _ = et.reconstruct(et.fraction_oracle(f), n, d, 10**5, den=f.den, variables=f.vars)
        assert r == f


def test_undersized_degree_bound_is_detected():
    vs = ("J1", "J2")
    f = parse_frac("(J1^3 + J2)/(J1*J2^2 - 1)", vs)
    with pytest.raises(et.ReconstructionError):
        et.reconstruct(et.fraction_oracle(f), 2, 1, 1000, den=f.den, variables=vs, N2=8)


def test_noisy_oracle_is_rejected():
    vs = ("J1", "J2")
    f = parse_frac("(J1 + 2*J2)/(J2 + 3)", vs)
    clean = et.fraction_oracle(f)
    calls = []

    def noisy(pt):
        calls.append(pt)
        v = clean(pt)
        return v + 1 if len(calls) == 7 else v

    with pytest.raises(et.ReconstructionError):
        et.reconstruct(noisy, 2, 2, 1000, den=f.den, variables=vs, rounds=1)


def test_wrong_answer_at_verification_points():
    vs = ("J1",)
    f = parse_frac("J1^2 + 1", vs)
    clean = et.fraction_oracle(f)

    def liar(pt):
        # agrees with f on small integers, differs far away
        return clean(pt) + (1 if abs(pt[0]) > 1000 else 0)

    with pytest.raises(et.VerificationError):
        et.reconstruct(liar, 1, 2, 1000, variables=vs)


def test_pole_at_tree_point():
    vs = ("J1",)

    def oracle(pt):
        if pt[0] == 1:
            raise ZeroDivisionError
        return Fraction(1)

    with pytest.raises(et.PoleError):
        et.reconstruct(oracle, 1, 1, 100, variables=vs)


def test_degenerate_lines_are_retried():
    # on the lines y1 = 0 and y1 = 1 numerator and denominator share a factor
    vs = ("J1", "J2")
    f = parse_frac("(J1 - J2)*J1/(J2 - J1 + J1^2 - J1*J2 + 1)", vs)
    oracle = et.fraction_oracle(f)
    first = et.build_tree(2, 2, 1000, den=f.den, N2=6)
    with pytest.raises(et.DegenerateLinesError) as err:
        et.reconstruct_fraction(oracle, 2, 2, first, variables=vs)
    assert set(err.value.paths) == {(0,), (1,)}
    r, data = et.reconstruct(oracle, 2, 2, 1000, den=f.den, variables=vs)
    assert r == f
    assert not {0, 1} & set(data.tree.sons(()))
