import math

import numpy as np
import pytest

from mle_phase.boundary import (
    boundary_curve,
    objective,
    solve_boundary,
    solve_boundary_1d,
)
from mle_phase.probability import ModelParams, gauss_hermite_rule, sample_yv
from mle_phase.rng import RngSeed


def finite_difference_gradient(params, t, rule, h=1e-5):
    g = np.zeros(2)
    for i in range(2):
        tp, tm = list(t), list(t)
        tp[i] += h
        tm[i] -= h
        g[i] = (objective(params, tp, rule).value - objective(params, tm, rule).value) / (2 * h)
    return g


def finite_difference_hessian(params, t, rule, h=1e-4):
    hess = np.zeros((2, 2))
    for i in range(2):
        tp, tm = list(t), list(t)
        tp[i] += h
        tm[i] -= h
        gp = objective(params, tp, rule).gradient
        gm = objective(params, tm, rule).gradient
        hess[:, i] = (gp - gm) / (2 * h)
    return 0.5 * (hess + hess.T)


class TestObjective:
    def test_null_params_at_origin(self):
        ev = objective(ModelParams(0, 0), (0.0, 0.0))
        assert ev.value == pytest.approx(0.5, abs=1e-14)
        assert np.linalg.norm(ev.gradient) <= 1e-14

    def test_null_params_closed_form(self):
        # at (beta0, gamma0) = (0, 0) the objective is (1 + t0^2 + t1^2)/2
        gen = np.random.default_rng(11)
        for _ in range(20):
            a, b = gen.uniform(-3, 3, 2)
            ev = objective(ModelParams(0, 0), (a, b))
            assert ev.value == pytest.approx((1 + a * a + b * b) / 2, rel=1e-12)

    def test_gradient_matches_finite_differences(self):
        gen = np.random.default_rng(12)
        rule = gauss_hermite_rule(96)
        for _ in range(25):
            params = ModelParams(float(gen.uniform(-3, 3)), float(gen.uniform(0, 3)))
            t = tuple(gen.uniform(-2, 2, 2))
            ev = objective(params, t, rule)
            fd = finite_difference_gradient(params, t, rule)
            scale = max(1.0, float(np.linalg.norm(fd)))
            assert np.linalg.norm(ev.gradient - fd) <= 1e-5 * scale

    def test_hessian_matches_finite_differences(self):
        gen = np.random.default_rng(13)
        rule = gauss_hermite_rule(96)
        for _ in range(15):
            params = ModelParams(float(gen.uniform(-3, 3)), float(gen.uniform(0, 3)))
            t = tuple(gen.uniform(-2, 2, 2))
            ev = objective(params, t, rule)
            fd = finite_difference_hessian(params, t, rule)
            assert np.linalg.norm(ev.hessian - fd) <= 1e-5 * max(1.0, np.linalg.norm(fd))

    def test_hessian_positive_definite(self):
        gen = np.random.default_rng(14)
        for _ in range(20):
            params = ModelParams(float(gen.uniform(-2, 2)), float(gen.uniform(0, 2)))
            t = tuple(gen.uniform(-3, 3, 2))
            eigs = np.linalg.eigvalsh(objective(params, t).hessian)
            assert eigs.min() > 0

    def test_value_nonnegative(self):
        gen = np.random.default_rng(15)
        for _ in range(20):
            params = ModelParams(float(gen.uniform(-2, 2)), float(gen.uniform(0, 2)))
            assert objective(params, tuple(gen.uniform(-4, 4, 2))).value >= 0

    def test_convexity_along_random_segments(self):
        gen = np.random.default_rng(16)
        params = ModelParams(0.7, 1.1)
        for _ in range(30):
            a = gen.uniform(-3, 3, 2)
            b = gen.uniform(-3, 3, 2)
            mid = 0.5 * (a + b)
            fa = objective(params, a).value
            fb = objective(params, b).value
            fm = objective(params, mid).value
            assert fm <= 0.5 * (fa + fb) + 1e-12

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            objective(ModelParams(0, 0), (math.nan, 0.0))


class TestSolveBoundary:
    def test_cover_limit(self):
        sol = solve_boundary(ModelParams(0, 0))
        assert sol.converged
        assert sol.h == pytest.approx(0.5, abs=1e-9)
        assert abs(sol.t_star[0]) <= 1e-9 and abs(sol.t_star[1]) <= 1e-9

    def test_asymmetric_response_value(self):
        sol = solve_boundary(ModelParams(math.log(9), 0))
        assert sol.converged
        assert sol.h == pytest.approx(0.255, abs=0.005)

    def test_matches_1d_reduction_gamma_only(self):
        sol2 = solve_boundary(ModelParams(0, 5))
        sol1 = solve_boundary_1d(ModelParams(0, 5), "v")
        assert abs(sol2.h - sol1.h) <= 1e-6

    def test_gradient_norm_at_solution(self):
        sol = solve_boundary(ModelParams(1.0, 2.0), tol=1e-9)
        assert sol.converged and sol.grad_norm <= 1e-9

    def test_minimizer_nonpositive_for_nonnegative_params(self):
        gen = np.random.default_rng(17)
        for _ in range(10):
            params = ModelParams(float(gen.uniform(0, 3)), float(gen.uniform(0, 3)))
            sol = solve_boundary(params)
            assert sol.t_star[0] <= 1e-8 and sol.t_star[1] <= 1e-8

    def test_symmetry_in_intercept(self):
        gen = np.random.default_rng(18)
        for _ in range(8):
            b0 = float(gen.uniform(0.1, 4))
            g0 = float(gen.uniform(0, 3))
            h_pos = solve_boundary(ModelParams(b0, g0)).h
            h_neg = solve_boundary(ModelParams(-b0, g0)).h
            assert abs(h_pos - h_neg) <= 1e-10

    def test_monotone_decreasing_in_intercept(self):
        for g0 in (0.0, 1.0, 4.0):
            hs = [solve_boundary(ModelParams(b, g0)).h for b in np.linspace(0, 6, 13)]
            assert np.all(np.diff(hs) < 0), f"not decreasing in beta0 at gamma0={g0}"

    def test_monotone_decreasing_in_slope_signal_for_small_intercept(self):
        for b0 in (0.0, 0.75, 1.5):
            hs = [solve_boundary(ModelParams(b0, g)).h for g in np.linspace(0, 5, 11)]
            assert np.all(np.diff(hs) < 0), f"not decreasing in gamma0 at beta0={b0}"

    def test_not_monotone_in_slope_signal_for_large_intercept(self):
        # h grows with gamma0 once the intercept dominates; confirmed
        # independently by adaptive quadrature, the empirical boundary
        # statistic, and LP phase experiments, so pin the behavior here.
        h_flat = solve_boundary(ModelParams(3.2, 0.0)).h
        h_tilt = solve_boundary(ModelParams(3.2, 0.8)).h
        assert h_tilt > h_flat + 0.01

    def test_range(self):
        for params in (ModelParams(0, 0), ModelParams(2, 1), ModelParams(0, 8)):
            h = solve_boundary(params).h
            assert 0 < h <= 0.5 + 1e-12

    def test_newton_quadratic_tail(self):
        # once inside the quadratic basin the gradient norm collapses fast
        for params in (ModelParams(0, 2), ModelParams(1.5, 1), ModelParams(2, 8)):
            hist = solve_boundary(params).grad_norm_history
            tail = [g for g in hist if g < 5e-3]
            assert len(tail) >= 2
            for g1, g2 in zip(tail, tail[1:]):
                # 50*g^2 is still well below g at this scale
                assert g2 <= max(50 * g1 * g1, 1e-12)

    def test_tol_validation(self):
        with pytest.raises(ValueError):
            solve_boundary(ModelParams(0, 0), tol=0.0)


class TestSolve1d:
    def test_null_v_only(self):
        sol = solve_boundary_1d(ModelParams(0, 0), "v")
        assert sol.h == pytest.approx(0.5, abs=1e-12)
        assert sol.t_star == (0.0, 0.0)

    def test_y_only_asymmetric(self):
        sol = solve_boundary_1d(ModelParams(math.log(9), 0), "y")
        assert sol.h == pytest.approx(0.255, abs=0.005)

    def test_v_only_matches_2d(self):
        s1 = solve_boundary_1d(ModelParams(0, 1), "v")
        s2 = solve_boundary(ModelParams(0, 1))
        assert abs(s1.h - s2.h) <= 1e-6

    def test_preconditions(self):
        with pytest.raises(ValueError):
            solve_boundary_1d(ModelParams(0, 1), "y")
        with pytest.raises(ValueError):
            solve_boundary_1d(ModelParams(1, 0), "v")
        with pytest.raises(ValueError):
            solve_boundary_1d(ModelParams(0, 0), "both")


class TestBoundaryCurve:
    def test_left_endpoint_and_decrease(self):
        pts = boundary_curve(0.0, np.linspace(0, 10, 21))
        assert pts[0].h == pytest.approx(0.5, abs=1e-9)
        hs = [p.h for p in pts]
        assert np.all(np.diff(hs) < 0)

    def test_prob_axis_shape(self):
        # the intercept-only curve through P(y=1) = 0.9, i.e. gamma = ln 9
        pts = boundary_curve(1.0, [0.0, math.log(9), 6.0])
        assert pts[0].h == pytest.approx(0.5, abs=1e-9)
        assert pts[1].h == pytest.approx(0.255, abs=0.005)
        assert pts[2].h < pts[1].h < pts[0].h

    def test_infinite_signal_limit(self):
        # h decays toward 0; at gamma = 1000 both the solver value and a
        # Monte Carlo upper bound on the true objective sit below 0.02
        trend = boundary_curve(0.3, [10, 30, 100])
        hs = [p.h for p in trend]
        assert hs[0] > hs[1] > hs[2]
        pt = boundary_curve(0.3, [1000.0])[0]
        assert pt.h < 0.02
        t0, t1 = pt.solution.t_star
        params = ModelParams(0.3 * 1000, math.sqrt(1 - 0.09) * 1000)
        gen = RngSeed(606).generator()
        y, v = sample_yv(params, gen, 2_000_000)
        z = gen.standard_normal(2_000_000)
        mc_upper = float(np.mean(np.maximum(t0 * y + t1 * v - z, 0.0) ** 2))
        assert mc_upper < 0.02

    def test_validation(self):
        with pytest.raises(ValueError):
            boundary_curve(1.5, [0, 1])
        with pytest.raises(ValueError):
            boundary_curve(0.5, [-1.0])
