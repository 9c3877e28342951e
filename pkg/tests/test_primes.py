import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heckescope import primes as pr
from oracles import factor_trial, is_prime_trial


def test_interval_examples():
    assert pr.primes_in_interval(10, 10) == [11, 13, 17, 19]
    assert len(pr.primes_in_interval(0, 100)) == 25
    assert pr.primes_in_interval(10 ** 6, 1000)[0] == 1000003


@given(st.integers(0, 10 ** 7), st.integers(0, 3000))
@settings(max_examples=150, deadline=None)
def test_interval_sieve_matches_trial_division(x, y):
    assert pr.primes_in_interval(x, y) == [n for n in range(x + 1, x + y + 1) if is_prime_trial(n)]


def test_segments_cross_boundaries():
    # long enough to span several sieve segments
    got = pr.primes_in_interval(999_000, 3_000_000)
    ref = pr.primes_in_interval(0, 3_999_000)
    assert got == [p for p in ref if p > 999_000]


def test_prime_count():
    assert pr.prime_count(10) == 4
    assert pr.prime_count(100) == 25
    assert pr.prime_count(10 ** 6) == 78498
    assert pr.prime_count(1) == 0


def test_interval_lengths():
    assert pr.interval_length(pr.IntervalSpec(8, pr.PowerLog(1.0))) == 3
    assert pr.interval_length(pr.IntervalSpec(10 ** 6, pr.HalfPlusEps(0.05))) == 1995
    lx = math.log(1e6)
    assert pr.interval_length(pr.IntervalSpec(10 ** 6, pr.EtaThreeQuarters())) == math.floor(
        1e6 ** 0.75 * lx * math.log(lx))
    with mpmath.workdps(40):
        lxm = mpmath.log(mpmath.mpf(10) ** 6)
        ref = int(mpmath.floor(mpmath.mpf(10) ** 4.5 * lxm * mpmath.log(lxm)))
    assert ref == 1147168
    assert pr.interval_length(pr.IntervalSpec(10 ** 6, pr.EtaThreeQuarters())) == ref
    assert pr.interval_length(pr.IntervalSpec(50, pr.Fixed(0))) == 0


@pytest.mark.parametrize("shape", [pr.HalfPlusEps(0.2), pr.HalfPlusEps(0.0), pr.PowerLog(0.0)])
def test_interval_shape_rejects(shape):
    with pytest.raises(ValueError):
        pr.interval_length(pr.IntervalSpec(10 ** 5, shape))


def test_parse_shape_round_trip():
    for text in ("powerlog:1", "halfeps:0.05", "eta", "fixed:1000"):
        assert pr.shape_label(pr.parse_shape(text)) == text
    with pytest.raises(ValueError):
        pr.parse_shape("square:2")


@given(st.integers(-10, 200_000))
@settings(max_examples=500, deadline=None)
def test_primality_small(n):
    assert pr.is_probable_prime(n) == is_prime_trial(n)


def test_primality_large():
    m61 = 2 ** 61 - 1
    m127 = 2 ** 127 - 1
    assert pr.is_probable_prime(m61)
    assert pr.is_probable_prime(m127)
    assert not pr.is_probable_prime(m61 * m127)
    # strong pseudoprime to every base below 41
    assert not pr.is_probable_prime(3317044064679887385961981)
    # Carmichael numbers
    for n in (561, 41041, 825265, 321197185):
        assert not pr.is_probable_prime(n)


def test_factor_examples():
    r = pr.largest_prime_factor(0)
    assert (r.lpf, r.status) == (1, "exact")
    assert pr.largest_prime_factor(1).lpf == 1
    assert pr.largest_prime_factor(-1).lpf == 1
    r = pr.largest_prime_factor(-24)
    assert (r.lpf, r.status, r.resolved) == (3, "exact", ((2, 3), (3, 1)))
    r = pr.largest_prime_factor(4830)
    assert r.lpf == 23 and dict(r.resolved) == {2: 1, 3: 1, 5: 1, 7: 1, 23: 1}


@given(st.integers(-10 ** 12, 10 ** 12))
@settings(max_examples=300, deadline=None)
def test_factor_matches_trial_division(n):
    r = pr.largest_prime_factor(n)
    if abs(n) <= 1:
        assert r.lpf == 1
        return
    ref = factor_trial(n)
    assert dict(r.resolved) == ref
    assert r.lpf == max(ref) and r.lpf_exact
    assert r.sign * r.reassemble() == n


def test_rho_splits_semiprimes():
    p, q = 1000000007, 998244353
    r = pr.largest_prime_factor(p * q * 12)
    assert dict(r.resolved) == {2: 2, 3: 1, p: 1, q: 1}
    big = (2 ** 61 - 1) * 1000000000039
    r = pr.largest_prime_factor(big)
    assert r.lpf == 2 ** 61 - 1 and r.lpf_exact


def test_budget_exhaustion_reports_at_least():
    p, q = 2 ** 61 - 1, 2 ** 89 - 1
    r = pr.largest_prime_factor(6 * p * q, pr.FactorBudget(rho_iterations=10, restarts=1))
    assert r.status == "atleast"
    assert r.lpf == 3
    assert r.unresolved_cofactor == p * q
    assert r.reassemble() == 6 * p * q


def test_factoring_is_deterministic():
    n = 1000000007 * 998244353 * 1000003 * 999983
    a = pr.largest_prime_factor(n, pr.FactorBudget(seed=7))
    b = pr.largest_prime_factor(n, pr.FactorBudget(seed=7))
    assert a == b


def test_valuation():
    assert pr.valuation(84480, 2) == 9
    assert pr.valuation(7, 3) == 0
    assert pr.valuation(-24, 2) == 3
    with pytest.raises(ValueError):
        pr.valuation(0, 2)
