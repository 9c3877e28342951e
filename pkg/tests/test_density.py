from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heckescope import density as dn
from heckescope.eigenform import hecke_powers
from heckescope.primes import prime_count, primes_in_interval


def test_pi_f_m_examples(delta_small):
    assert dn.pi_f_m(delta_small, 1, 3, 10) == 3
    assert dn.pi_f_m(delta_small, 1, 2, 100) == 25
    assert dn.pi_f_m(delta_small, 3, 5, 1) == 0
    with pytest.raises(ValueError):
        dn.pi_f_m(delta_small, 1, 1, 100)


@given(st.integers(0, 8), st.one_of(st.integers(2, 5000), st.integers(2 ** 31, 2 ** 70)))
@settings(max_examples=80, deadline=None)
def test_modular_recurrence_matches_exact(m, d):
    from heckescope.eigenform import build_form

    t = build_form("delta", 3000)
    ps, cs = t.prime_coeffs(3000)
    ps, cs = ps[::37], cs[::37]
    res = dn.residues_mod(t, m, d, ps, cs)
    ref = [hecke_powers(c, p, 12, m)[m] % d for p, c in zip(ps, cs)]
    assert [int(r) for r in res] == ref


def test_count_in_interval(delta_small):
    for m, d in ((1, 2), (2, 13), (4, 5)):
        total = dn.pi_f_m(delta_small, m, d, 15_000) - dn.pi_f_m(delta_small, m, d, 10_000)
        assert dn.count_in_interval(delta_small, m, d, 10_000, 5_000) == total


def test_expected_closed_forms():
    assert dn.delta_expected(3, 13).value == Fraction(1, 12)
    assert dn.delta_expected(5, 5, 2).value == 0
    assert dn.delta_expected(3, 3).value == Fraction(3, 8)
    assert dn.delta_expected(3, 11).value == Fraction(1, 12)  # 11 = -1 mod 3
    assert dn.delta_expected(5, 7).value == 0
    assert dn.delta_expected(3, 3, 2) is None
    with pytest.raises(ValueError):
        dn.delta_expected(4, 13)
    with pytest.raises(ValueError):
        dn.delta_expected(3, 15)


def test_one_over_ell_reference():
    r = dn.delta1_reference(11)
    assert r.center == pytest.approx(1 / 11)
    r2 = dn.delta1_reference(2)
    assert r2.band == (0.0, 1.0) and not r2.informative
    r691 = dn.delta1_reference(691)
    assert r691.center == pytest.approx(0.001447, abs=1e-6)
    assert r691.possibly_exceptional
    assert 691 in dn.eisenstein_congruence_primes(12)
    assert not dn.delta1_reference(101).possibly_exceptional


def test_691_congruence(delta_small):
    # tau(p) = 1 + p^11 mod 691 makes 691 | tau(p) exactly when p^11 = -1
    ps, cs = delta_small.prime_coeffs(20_000)
    for p, c in zip(ps, cs):
        assert (c % 691 == 0) == (pow(p, 11, 691) == 690)


def test_vanishing_law_small(delta_small):
    for q in (3, 5, 7):
        for ell in primes_in_interval(1, 100):
            if ell % q in (0, 1, q - 1):
                continue
            ps, cs = delta_small.prime_coeffs(20_000)
            keep = [i for i, p in enumerate(ps) if p != ell]
            res = dn.residues_mod(delta_small, q - 1, ell, [ps[i] for i in keep], [cs[i] for i in keep])
            assert not np.any(np.asarray(res) == 0), (q, ell)


def test_estimate_and_csv(delta_small):
    e = dn.estimate_density(delta_small, 2, 13, 20_000)
    assert e.expected == Fraction(1, 12)
    assert e.pi_x == prime_count(20_000)
    assert 0 <= e.count <= e.pi_x
    assert e.std_err == pytest.approx(np.sqrt(e.ratio * (1 - e.ratio) / e.pi_x))
    text = dn.density_rows_csv([e])
    header, row = text.strip().split("\n")
    assert header == "form,m,d,x,count,pi_x,ratio,expected,std_err,flag"
    assert row.startswith("delta,2,13,20000,")
    assert dn.estimate_density(delta_small, 1, 6, 1000).expected is None


def test_exceptional_flag():
    e = dn.DensityEstimate(None, 2, 7, 10 ** 6, 1, 78498, Fraction(1, 6))
    assert e.flag() == "candidate-exceptional"


def test_short_interval_examples(delta_small):
    s = dn.short_interval_congruence(delta_small, 1, 2, 1000, 1000)
    assert s.observed == 135 == prime_count(2000) - prime_count(1000)
    empty = dn.short_interval_congruence(delta_small, 2, 13, 1327, 4)  # 1327..1331 has no primes past 1327
    assert empty.observed == 0 and empty.primes_in_interval == 0


def test_mod7_is_exceptional_for_delta(delta_big):
    # tau(p) = p(1 + p^3) mod 7, so tau(p^2) = p^2(2 + p^3) is a unit mod 7 for p != 7
    s = dn.short_interval_congruence(delta_big, 2, 7, 10 ** 5, 10 ** 4)
    assert s.reference == pytest.approx(1 / 6)
    assert s.observed == 0
    assert s.predicted > 4 * s.sigma
    ps, cs = delta_big.prime_coeffs(10 ** 4)
    for p, c in zip(ps, cs):
        if p != 7:
            assert c % 7 == p * (1 + p ** 3) % 7
