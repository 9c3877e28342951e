import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from heckescope.simplex import solve_standard


def _random_lp(seed, m, n):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(m, n))
    x0 = rng.uniform(0, 1, size=n)
    b = A @ x0  # feasible by construction
    c = rng.normal(size=n) + 0.1
    return c, A, b


@given(st.integers(0, 10 ** 6), st.integers(1, 8), st.integers(1, 12))
@settings(max_examples=150, deadline=None)
def test_matches_linprog(seed, m, extra):
    n = m + extra
    c, A, b = _random_lp(seed, m, n)
    ref = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    for rule in ("dantzig", "bland"):
        res = solve_standard(c, A, b, rule=rule)
        if ref.status == 3:
            assert res.status == "unbounded"
            continue
        assert ref.status == 0
        assert res.status == "optimal"
        assert res.objective == pytest.approx(ref.fun, rel=1e-7, abs=1e-7)
        assert np.allclose(A @ res.x, b, atol=1e-8)
        assert (res.x >= -1e-9).all()
        # dual feasibility and strong duality
        assert (A.T @ res.y <= c + 1e-7).all()
        assert b @ res.y == pytest.approx(res.objective, rel=1e-7, abs=1e-7)


def test_infeasible():
    A = np.array([[1.0, 1.0]])
    assert solve_standard([1, 1], A, [-1.0]).status == "infeasible"


def test_redundant_rows():
    A = np.array([[1.0, 1.0, 0.0], [2.0, 2.0, 0.0], [0.0, 1.0, 1.0]])
    res = solve_standard([1.0, 2.0, 0.5], A, [1.0, 2.0, 1.0])
    assert res.status == "optimal"
    # x2 = 0 forces x1 = x3 = 1
    assert res.objective == pytest.approx(1.5)


def test_degenerate_klee_minty_like():
    # classic cycling example (Beale); the lexicographic rule must terminate
    c = np.array([-0.75, 150, -0.02, 6, 0, 0, 0])
    A = np.array([[0.25, -60, -0.04, 9, 1, 0, 0],
                  [0.5, -90, -0.02, 3, 0, 1, 0],
                  [0, 0, 1, 0, 0, 0, 1]], dtype=float)
    b = np.array([0, 0, 1.0])
    for rule in ("dantzig", "bland"):
        res = solve_standard(c, A, b, basis=[4, 5, 6], rule=rule)
        assert res.status == "optimal"
        assert res.objective == pytest.approx(-0.05)


def test_warm_start_rejects_infeasible_basis():
    A = np.array([[1.0, -1.0]])
    with pytest.raises(ValueError):
        solve_standard([1, 1], A, [1.0], basis=[1])
