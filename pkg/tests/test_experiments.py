import math

import pytest

from heckescope import experiments as ex
from heckescope.chebyshev import IntervalUnion, build_J_q, st_measure
from heckescope.eigenform import EigenformTable, get_form
from heckescope.minorize import minorize
from heckescope.primes import FactorBudget, Fixed, IntervalSpec, largest_prime_factor

SMALL = FactorBudget(rho_iterations=1 << 13, restarts=2)


def test_reduce_exponent():
    assert ex.reduce_exponent(1) == 2
    assert ex.reduce_exponent(5) == 3
    assert ex.reduce_exponent(9) == 5
    assert ex.reduce_exponent(6) == 7
    with pytest.raises(ValueError):
        ex.reduce_exponent(0)


def test_bound_values():
    t1 = ex.BoundSpec("T1", n=1, eps=0.1).evaluate(1e5)
    lx = math.log(1e5)
    assert t1 == pytest.approx(lx ** 0.125 * math.log(lx) ** 0.275)
    assert t1 < 2
    t3 = ex.BoundSpec("T3", n=2).evaluate(1e4)
    assert t3 == pytest.approx(4.03, abs=0.01)
    with pytest.raises(ValueError):
        ex.BoundSpec("T2", n=2, eps=0.05)
    with pytest.raises(ValueError):
        ex.BoundSpec("T2", n=1, eps=0.2)
    assert ex.parse_bound("t2:0.05:2", 1).c == 2
    assert ex.parse_bound("t3", 4).theorem == "T3"
    with pytest.raises(ValueError):
        ex.parse_bound("t4", 1)


def test_t2_from_certificate():
    C, J = build_J_q(3)
    cert = minorize(J, 8)
    spec = ex.BoundSpec.t2_from_cert(0.05, 2, cert)
    assert spec.b == pytest.approx(min(cert.b0, 1 / 7) / 2)
    assert spec.evaluate(1e6) == pytest.approx(1e6 ** (0.05 * spec.b))


def test_scan_t3_example(delta_small):
    rep = ex.scan_interval(delta_small, 2, IntervalSpec(10_000, Fixed(1000)), ex.BoundSpec("T3", n=2),
                           SMALL)
    assert rep.bound_value == pytest.approx(4.03, abs=0.01)
    assert len(rep.rows) == 106
    assert rep.qualifying_count == sum(r.lpf > rep.bound_value for r in rep.rows)
    for r in rep.rows:
        assert r.lpf_status in ("exact", "atleast")


def test_scan_empty_interval(delta_small):
    rep = ex.scan_interval(delta_small, 1, IntervalSpec(1327, Fixed(3)), ex.BoundSpec("T1"))
    assert rep.no_primes and rep.qualifying_count == 0
    rep0 = ex.scan_interval(delta_small, 1, IntervalSpec(1000, Fixed(0)), ex.BoundSpec("T1"))
    assert rep0.summary()["no_primes"] and rep0.qualifying_density == 0.0


def test_scan_determinism_and_workers(delta_small):
    spec = IntervalSpec(5000, Fixed(400))
    a = ex.scan_interval(delta_small, 3, spec, ex.BoundSpec("T3", n=3), SMALL)
    b = ex.scan_interval(delta_small, 3, spec, ex.BoundSpec("T3", n=3), SMALL, workers=2)
    assert a.to_csv() == b.to_csv()
    assert a.summary_json() == b.summary_json()
    assert a.to_csv().splitlines()[0] == "p,n,afpn_digits,lpf,lpf_status,lambda,qualifies"


def test_reduction_soundness(delta_small):
    spec = IntervalSpec(2000, Fixed(300))
    for n in (3, 5, 8):
        full = ex.scan_interval(delta_small, n, spec, ex.BoundSpec("T3", n=n), SMALL)
        red = ex.scan_interval(delta_small, n, spec, ex.BoundSpec("T3", n=n), SMALL, reduce=True)
        assert red.exponent == ex.reduce_exponent(n) - 1
        for a, b in zip(full.rows, red.rows):
            assert a.p == b.p
            if a.nonzero and a.lpf_status == b.lpf_status == "exact":
                assert a.lpf >= b.lpf


def test_exponent_fit():
    xs = [10 ** 4, 10 ** 6, 10 ** 8, 10 ** 10]
    reps = [ex.ScanReport("delta", 1, 1, x, 1, "fixed:1", "t1:0.1", 1.0,
                          [ex.ScanRow(2, True, 1, 0.0, 7 * math.isqrt(x), "exact", True)])
            for x in xs]
    slope, _ = ex.exponent_fit(reps)
    assert slope == pytest.approx(0.5, abs=1e-9)
    assert ex.fit_loglog(xs, [5, 5, 5, 5])[0] == pytest.approx(0.0, abs=1e-12)
    assert ex.fit_loglog(xs, [3 * x ** 0.5 for x in xs])[0] == pytest.approx(0.5, abs=1e-9)
    with pytest.raises(ValueError):
        ex.exponent_fit(reps[:2])
    with pytest.raises(ValueError):
        ex.exponent_fit(reps[::-1])


def test_sato_tate_additivity(delta_small):
    I = IntervalUnion.from_pairs([(-1, -0.1)])
    whole = ex.sato_tate_short_sum(delta_small, I, 10_000, 6_000)
    left = ex.sato_tate_short_sum(delta_small, I, 10_000, 2_500)
    right = ex.sato_tate_short_sum(delta_small, I, 12_500, 3_500)
    assert whole.S == pytest.approx(left.S + right.S, rel=1e-15)
    assert whole.primes == left.primes + right.primes
    assert whole.mu_st == pytest.approx(st_measure(I))
    empty = ex.sato_tate_short_sum(delta_small, IntervalUnion(), 10_000, 6_000)
    assert empty.S == 0


def test_sato_tate_full_equals_log_sum(delta_small):
    s = ex.sato_tate_short_sum(delta_small, IntervalUnion.full(), 10_000, 6_000)
    ps, _ = delta_small.prime_coeffs(16_000)
    assert s.S == pytest.approx(sum(math.log(p) for p in ps if p > 10_000), rel=1e-12)


def test_ledger_small_interval(delta_small):
    led = ex.valuation_ledger(delta_small, 2, 1000, 100, 10 ** 6)
    assert led.inequality_holds and not led.inequality_failures
    assert led.product_identity
    assert led.full_residual <= 1e-12


def test_ledger_single_power_of_two():
    # a fake table whose only prime in (23, 29] has a_f(29) = -2^5
    coeffs = [0] * 30
    coeffs[28] = -32
    t = EigenformTable(get_form("delta"), 30, tuple(coeffs))
    led = ex.valuation_ledger(t, 2, 23, 6, 100)
    assert led.primes == 1
    assert led.nu == {2: 5}
    assert led.smooth_primes == 1 and led.product_identity
    assert led.identity_residual == 0.0
    assert led.lhs == pytest.approx(5 * math.log(2))


def test_ledger_nu_matches_factorizations(delta_small):
    led = ex.valuation_ledger(delta_small, 3, 3000, 200, 50, SMALL)
    ps, cs = delta_small.prime_coeffs(3200)
    nu = {}
    for p, c in zip(ps, cs):
        if p > 3000:
            for ell, e in largest_prime_factor(c * c - p ** 11, SMALL).resolved:
                if ell <= 50:
                    nu[ell] = nu.get(ell, 0) + e
    assert led.nu == nu
