import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_instance
from onebitboost.lpmargin import solve_max_margin
from onebitboost.oracle import brute_force_margin, cross_polytope_grid, exhaustive_sign_check


def test_grid_on_l1_sphere():
    pts = cross_polytope_grid(1000)
    np.testing.assert_allclose(np.abs(pts).sum(axis=1), 1.0, atol=1e-12)
    np.testing.assert_array_equal(pts[0], [1.0, 0.0])
    np.testing.assert_array_equal(pts[250], [0.0, 1.0])


def test_brute_force_examples(two_axis):
    assert brute_force_margin(two_axis) == pytest.approx(0.5, abs=1e-4)
    assert brute_force_margin(make_instance([[3.0, 0.0]], [1])) == pytest.approx(3.0, abs=1e-4)
    assert brute_force_margin(make_instance([[1.0, 0.0], [1.0, 0.0]], [1, -1])) <= 0


def test_brute_force_guards():
    with pytest.raises(NotImplementedError):
        brute_force_margin(make_instance([[1.0, 0.0, 0.0]], [1]))
    with pytest.raises(ValueError):
        brute_force_margin(make_instance([[1.0, 0.0]], [1]), grid_count=10)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_brute_force_below_lp(seed, n):
    g = np.random.default_rng(seed)
    inst = make_instance(g.standard_normal((n, 2)), np.where(g.random(n) < 0.5, -1, 1))
    sol = solve_max_margin(inst)
    bf = brute_force_margin(inst, 20_000)
    if sol.optimal:
        assert bf <= sol.margin + 1e-6
    else:
        assert bf <= 1e-12


def test_sign_check_examples(two_axis):
    beta = solve_max_margin(two_axis).beta_hat
    assert exhaustive_sign_check(two_axis, beta)
    assert not exhaustive_sign_check(two_axis, -beta)
    assert not exhaustive_sign_check(make_instance([[0.0, 1.0]], [1]), np.array([1.0, 0.0]))
