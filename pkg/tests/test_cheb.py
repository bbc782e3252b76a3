import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heavytail import cheb
from heavytail.cheb import FuncSystem, combo_eval, count_sign_changes


def test_combo_examples():
    assert combo_eval(FuncSystem.power_sgn((0, 1)), (-1, 1), 1.0) == 0.0
    sys2 = FuncSystem.power_sgn((0, 1, 2))
    assert combo_eval(sys2, (-1, 0, 1), 1.0) == 0.0
    assert combo_eval(sys2, (-1, 0, 1), -1.0) == 0.0
    sys4 = FuncSystem.power_sgn((0, 1, 2.5, 3.5, 5))
    c = np.random.default_rng(0).standard_normal(5)
    assert combo_eval(sys4, c, 0.0) == c[0]


def test_odd_terms_carry_sign():
    sys3 = FuncSystem.power_sgn((0, 1, 2, 3.5))
    assert combo_eval(sys3, (0, 0, 0, 1), -2.0) == pytest.approx(-(2 ** 3.5))
    assert combo_eval(sys3, (0, 0, 1, 0), -2.0) == pytest.approx(4.0)


def test_zero_coefficients_rejected():
    with pytest.raises(ValueError):
        combo_eval(FuncSystem.power_sgn((0, 1)), (0, 0), 1.0)
    with pytest.raises(ValueError):
        combo_eval(FuncSystem.power_sgn((0, 1)), (1, 0, 0), 1.0)


def test_system_validation():
    with pytest.raises(ValueError):
        FuncSystem.power_sgn((0, 2))
    with pytest.raises(ValueError):
        FuncSystem.power_sgn((0, 1, 3, 2))
    with pytest.raises(ValueError):
        FuncSystem("smooth", (0, 2), np.exp)
    assert FuncSystem.smooth(3).order == 3
    assert FuncSystem.power_sgn((0, 1, 2, 3, 4)).order == 4


def test_sign_change_examples():
    assert count_sign_changes(FuncSystem.power_sgn((0, 1, 2)), (-1, 0, 1), (-2, 2)) == 2
    assert count_sign_changes(FuncSystem.power_sgn((0, 1)), (1, 0), (-2, 2)) == 0
    with pytest.raises(ValueError):
        count_sign_changes(FuncSystem.power_sgn((0, 1)), (1, 1), (-2, 2), initial_grid=10)


def test_tangency_not_counted():
    # x^2 touches zero at the origin without changing sign
    assert count_sign_changes(FuncSystem.power_sgn((0, 1, 2)), (0, 0, 1), (-2, 2)) == 0


def test_close_root_pair_found():
    # (x - 0.3)(x - 0.3001) has two roots 1e-4 apart
    a, b = 0.3, 0.3001
    sys2 = FuncSystem.power_sgn((0, 1, 2))
    assert count_sign_changes(sys2, (a * b, -(a + b), 1.0), (-1, 1), initial_grid=64) == 2


def test_roots_outside_window_are_found():
    # roots at +-80 lie beyond the default [-50, 50] window
    sys2 = FuncSystem.power_sgn((0, 1, 2))
    assert count_sign_changes(sys2, (-6400.0, 0, 1)) == 2
    roots = cheb.find_roots(sys2, (-6400.0, 0, 1), (-100, 100))
    np.testing.assert_allclose(sorted(roots), [-80, 80], atol=1e-9)


def test_positive_lead_nonpositive_square_term():
    rng = np.random.default_rng(8)
    for _ in range(200):
        p = cheb.random_power_exponents(4, rng)
        c = rng.standard_normal(5)
        c[4], c[2] = 1.0, -abs(c[2])
        assert count_sign_changes(FuncSystem.power_sgn(p), c) <= 4


@given(st.lists(st.floats(-5, 5), min_size=4, max_size=4).filter(lambda v: any(abs(x) > 1e-3 for x in v)),
       st.floats(0.1, 10).flatmap(lambda m: st.sampled_from([m, -m])))
@settings(max_examples=40, deadline=None)
def test_scaling_invariance(coeffs, scale):
    sys3 = FuncSystem.power_sgn((0, 1, 2.2, 3.7))
    c = np.array(coeffs)
    assert count_sign_changes(sys3, c) == count_sign_changes(sys3, scale * c)


@given(st.floats(1.1, 6), st.floats(-3, 3), st.floats(0.05, 3))
@settings(max_examples=40, deadline=None)
def test_interpolation_property(p, x1, gap):
    sys2, c = cheb.interpolating_combo(p, x1, x1 + gap)
    assert combo_eval(sys2, c, x1) == pytest.approx(0.0, abs=1e-9 * (1 + abs(x1) ** p))
    assert count_sign_changes(sys2, c, (-10, 10)) == 2


def test_exponent_sampling_ranges():
    rng = np.random.default_rng(1)
    for _ in range(500):
        p = cheb.random_power_exponents(4, rng)
        assert p[:2] == (0.0, 1.0)
        assert 1.1 <= p[2] <= 4 and p[2] + 0.1 <= p[3] <= 6 and p[3] + 0.1 <= p[4] <= 9


def test_trial_order_one():
    s = cheb.cheb_trial(FuncSystem.power_sgn((0, 1)), 1000, seed=0)
    assert s.max_roots == 1 and s.violations == 0


def test_trial_order_four_seed_42():
    s = cheb.cheb_trial(("power-sgn", 4), 1000, seed=42)
    assert s.violations == 0
    assert s.max_roots <= 4


def test_trial_smooth_exp():
    s = cheb.cheb_trial(FuncSystem.smooth(3), 1000, seed=0)
    assert s.violations == 0 and s.max_roots <= 3


def test_trial_deterministic_and_jobs_independent():
    a = cheb.cheb_trial(("power-sgn", 3), 60, seed=5)
    b = cheb.cheb_trial(("power-sgn", 3), 60, seed=5)
    c = cheb.cheb_trial(("power-sgn", 3), 60, seed=5, jobs=3)
    assert a == b
    assert (a.max_roots, a.violations) == (c.max_roots, c.violations)


def test_dominance_radius_bounds_roots():
    rng = np.random.default_rng(2)
    for _ in range(100):
        p = cheb.random_power_exponents(4, rng)
        sys4 = FuncSystem.power_sgn(p)
        c = rng.standard_normal(5)
        r = cheb.dominance_radius(sys4, c)
        roots = cheb.find_roots(sys4, c, (-4 * r - 10, 4 * r + 10))
        assert all(abs(x) <= r for x in roots)
