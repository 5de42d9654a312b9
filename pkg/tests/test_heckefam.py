import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modeq.heckefam import (
    HeckeFamily,
    InvalidLevelError,
    UnsupportedFamilyError,
    degree_ratio_bound,
    denominator_weight,
    dim_v,
    hecke_degree,
    is_prime,
    isogeny_degree,
    phi_mul,
    quadratic_norm,
)

PRIMES = [2, 3, 5, 7, 11, 13, 97]


def test_hecke_degrees():
    assert hecke_degree(HeckeFamily.siegel(2)) == 15
    assert hecke_degree(HeckeFamily.elliptic(5)) == 6
    assert hecke_degree(HeckeFamily.hilbert(2, 1)) == 6


def test_isogeny_degrees():
    assert isogeny_degree(HeckeFamily.siegel(3)) == 9
    assert isogeny_degree(HeckeFamily.elliptic(7)) == 7
    assert isogeny_degree(HeckeFamily.hilbert(6, 1)) == 41


def test_quadratic_norm_examples():
    assert quadratic_norm(2, 1) == (5, True, True)
    assert quadratic_norm(6, 1) == (41, True, True)
    assert quadratic_norm(0, 1) == (-1, False, False)


def test_inert_prime_squared_is_prime_element():
    # 2 and 3 stay prime in Z[phi], with norms 4 and 9
    assert quadratic_norm(2, 0) == (4, True, True)
    assert quadratic_norm(3, 0) == (9, True, True)
    assert quadratic_norm(11, 0)[2] is False


def test_denominator_weights():
    assert denominator_weight(HeckeFamily.siegel(2), 1) == 150
    assert denominator_weight(HeckeFamily.siegel(2), 3) == 300
    assert denominator_weight(HeckeFamily.hilbert(2, 1), 2) == 120
    assert denominator_weight(HeckeFamily.elliptic(5), 1) == 72
    with pytest.raises(ValueError):
        denominator_weight(HeckeFamily.elliptic(5), 2)


def test_degree_ratio_bound_examples():
    assert degree_ratio_bound(1, 2, 5, 6) == (625, True)
    assert degree_ratio_bound(1, 4, 4, 15) == (4**16, True)
    n = 12
    bound, ok = degree_ratio_bound(n, 2, 1, n)
    assert bound == n**4 and ok


def test_invalid_levels():
    with pytest.raises(InvalidLevelError):
        HeckeFamily.siegel(4)
    with pytest.raises(InvalidLevelError):
        HeckeFamily.hilbert(0, 1)
    with pytest.raises(InvalidLevelError):
        HeckeFamily.parse("hilbert", "6")
    with pytest.raises(UnsupportedFamilyError):
        HeckeFamily.parse("unitary", "3")


def test_parse_and_json_roundtrip():
    fam = HeckeFamily.parse("hilbert", "6,1")
    assert fam.level == (6, 1) and fam.norm == 41
    assert HeckeFamily.from_json(fam.to_json()) == fam
    s = HeckeFamily.parse("Siegel", "3")
    assert HeckeFamily.from_json(s.to_json()) == s


def test_miller_rabin_against_sieve():
    limit = 5000
    sieve = [True] * limit
    sieve[0] = sieve[1] = False
    for i in range(2, limit):
        if sieve[i]:
            for j in range(i * i, limit, i):
                sieve[j] = False
    assert [n for n in range(limit) if is_prime(n)] == [n for n in range(limit) if sieve[n]]
    assert is_prime(2**61 - 1) and not is_prime(3215031751)


@pytest.mark.parametrize("fam", [HeckeFamily.elliptic(p) for p in PRIMES] + [HeckeFamily.siegel(p) for p in PRIMES]
                         + [HeckeFamily.hilbert(*ab) for ab in [(2, 1), (6, 1), (3, 1), (2, 0), (3, 0)]])
def test_degree_exceeds_isogeny_degree(fam):
    assert hecke_degree(fam) > isogeny_degree(fam) >= 1
    assert degree_ratio_bound(1, dim_v(fam), isogeny_degree(fam), hecke_degree(fam))[1]


@settings(max_examples=200)
@given(st.tuples(st.integers(-50, 50), st.integers(-50, 50)), st.tuples(st.integers(-50, 50), st.integers(-50, 50)))
def test_norm_is_multiplicative(x, y):
    n = lambda t: t[0] ** 2 + t[0] * t[1] - t[1] ** 2  # noqa: E731
    assert n(phi_mul(x, y)) == n(x) * n(y)
    if x != (0, 0) and y != (0, 0):
        assert quadratic_norm(*phi_mul(x, y))[0] == quadratic_norm(*x)[0] * quadratic_norm(*y)[0]
