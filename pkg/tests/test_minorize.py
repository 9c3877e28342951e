import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heckescope.chebyshev import IntervalUnion, build_I_q, build_J_q, u_series
from heckescope.minorize import (Infeasible, MinorizationCert, MinorizeOptions, minorize,
                                 verify_cert)

B0 = (1 + math.sqrt(7)) / 6
FAST = MinorizeOptions(refine=20_000)


def test_constant_target():
    cert = minorize(IntervalUnion.full(), 0)
    assert cert.b == pytest.approx((1.0,))
    check = verify_cert(cert)
    assert check.accepted and check.margin == pytest.approx(0.0, abs=1e-12)


def test_sym4_lower_half():
    cert = minorize(IntervalUnion.from_pairs([(-1, -0.1)]), 4)
    assert cert.b0 >= 0.08
    check = verify_cert(cert)
    assert check.accepted and check.margin >= -1e-9


def test_dichotomy_around_B0():
    assert B0 == pytest.approx(0.6076, abs=1e-4)
    ok = minorize(IntervalUnion.from_pairs([(-1, -B0 + 0.02)]), 4)
    assert isinstance(ok, MinorizationCert) and ok.b0 > 0
    assert verify_cert(ok).accepted
    bad = minorize(IntervalUnion.from_pairs([(-1, -B0 - 0.02)]), 4)
    assert isinstance(bad, Infeasible) and not bad
    assert isinstance(minorize(IntervalUnion.from_pairs([(-1, -0.65)]), 4), Infeasible)


def test_corrupted_certificate_rejected():
    cert = minorize(IntervalUnion.from_pairs([(-1, -0.1)]), 4)
    b = list(cert.b)
    b[0] += 0.5
    check = verify_cert(replace(cert, b=tuple(b)))
    assert not check.accepted
    assert check.margin < -0.4


def test_json_round_trip():
    cert = minorize(IntervalUnion.from_pairs([(-1, -0.1)]), 4)
    again = MinorizationCert.from_json(cert.dumps())
    assert again == cert
    assert set(cert.to_json()) == {"target", "M", "b", "margin", "grid_size"}


@pytest.mark.parametrize("q", [3, 5, 7])
def test_I_q_and_J_q_certificates(q):
    for I in (build_I_q(q), build_J_q(q)[1]):
        cert = minorize(I, 2 * q + 2)
        if isinstance(cert, Infeasible):
            continue
        check = verify_cert(cert)
        assert check.accepted, (q, check.margin)


def test_minorant_below_indicator_pointwise():
    I = IntervalUnion.from_pairs([(-1, -0.3), (0.2, 1)])
    cert = minorize(I, 10)
    t = np.random.default_rng(0).uniform(-1, 1, 200_000)
    assert (u_series(np.array(cert.b), t) <= I.indicator(t) + 1e-9).all()


def _b0(res) -> float:
    return res.b0 if isinstance(res, MinorizationCert) else 0.0


@given(st.floats(-0.5, 0.9), st.floats(0.0, 0.1), st.integers(1, 8))
@settings(max_examples=15, deadline=None)
def test_monotone_in_interval_and_degree(right, grow, M):
    small = IntervalUnion.from_pairs([(-1, right)])
    big = IntervalUnion.from_pairs([(-1, min(1.0, right + grow))])
    b_small = _b0(minorize(small, M, FAST))
    assert _b0(minorize(big, M, FAST)) >= b_small - 1e-9
    assert _b0(minorize(small, M + 1, FAST)) >= b_small - 1e-9


def test_negative_degree():
    with pytest.raises(ValueError):
        minorize(IntervalUnion.full(), -1)
