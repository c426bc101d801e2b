import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onebitboost import simplex


def _brute_force_lp(c, A, b):
    """Enumerate all bases of a tiny standard-form LP."""
    from itertools import combinations

    m, k = A.shape
    best = None
    for cols in combinations(range(k), m):
        B = A[:, cols]
        if abs(np.linalg.det(B)) < 1e-10:
            continue
        xB = np.linalg.solve(B, b)
        if np.any(xB < -1e-9):
            continue
        val = float(c[list(cols)] @ xB)
        best = val if best is None else min(best, val)
    return best


def test_small_known_lp():
    # min -x1 - x2 s.t. x1 + 2x2 + s1 = 4, 3x1 + x2 + s2 = 6
    A = np.array([[1.0, 2.0, 1.0, 0.0], [3.0, 1.0, 0.0, 1.0]])
    res = simplex.solve_standard_form(np.array([-1.0, -1.0, 0.0, 0.0]), A, np.array([4.0, 6.0]))
    assert res.status == simplex.OPTIMAL
    np.testing.assert_allclose(res.x[:2], [1.6, 1.2], atol=1e-12)
    assert res.objective == pytest.approx(-2.8)


def test_infeasible_and_unbounded():
    A = np.array([[1.0, 1.0]])
    assert simplex.solve_standard_form(np.zeros(2), A, np.array([-1.0])).status == simplex.INFEASIBLE
    A = np.array([[1.0, -1.0]])
    assert simplex.solve_standard_form(np.array([0.0, -1.0]), A, np.array([1.0])).status == simplex.UNBOUNDED


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 4))
def test_primal_matches_enumeration(seed, m, extra):
    g = np.random.default_rng(seed)
    A = np.hstack([g.normal(size=(m, extra + 1)), np.eye(m)])
    b = np.abs(g.normal(size=m)) + 0.1
    c = np.concatenate([g.normal(size=extra + 1), np.abs(g.normal(size=m))])
    res = simplex.solve_standard_form(c, A, b)
    ref = _brute_force_lp(c, A, b)
    if res.status == simplex.OPTIMAL:
        assert res.objective == pytest.approx(ref, abs=1e-8)
        assert np.all(res.x >= 0)
        np.testing.assert_allclose(A @ res.x, b, atol=1e-9)
    else:
        assert res.status == simplex.UNBOUNDED


def test_bland_mode_agrees():
    g = np.random.default_rng(3)
    Z = g.normal(size=(8, 16))
    A = np.hstack([Z, -Z, -np.eye(8)])
    c = np.concatenate([np.ones(32), np.zeros(8)])
    b = np.ones(8)
    fast = simplex.solve_standard_form(c, A, b)
    bland = simplex.solve_standard_form(c, A, b, bland_after=0)
    assert bland.used_bland
    assert bland.objective == pytest.approx(fast.objective, rel=1e-10)
    dual = simplex.dual_simplex(c, A, b, np.arange(32, 40), bland_after=0)
    assert dual.objective == pytest.approx(fast.objective, rel=1e-10)
