"""Tests for src.integrator: right-hand side, adaptive integration, RK4 oracle."""

import math

import numpy as np
import pytest

from src import constants
from src.integrator import (
    blowup_limit,
    integrate,
    make_rk4,
    rhs,
    rk4_integrate,
    rk4_state_at,
    sample,
    third_derivative,
    time_scale,
)
from src.integrator import dopri
from src.model import (
    GSpec,
    OutOfRange,
    ProblemSpec,
    ShootState,
    SolverControls,
    TerminationKind,
)


class TestRhs:

    def test_rhs_quadratic(self):
        d = rhs(ShootState(0.0, 1.0, 2.0, 3.0), GSpec.quadratic(0.5))
        assert (d.df, d.dfp, d.dfpp) == (2.0, 3.0, -5.0)

    def test_third_derivative_vectorized(self):
        g = GSpec.oracle_cubic()
        f = np.array([1.0, 0.5])
        fp = np.array([-0.5, 0.0])
        fpp = np.array([-0.25, 1.0])
        out = third_derivative(g, f, fp, fpp)
        expected = [-(1.0 * -0.25) - 0.25 * (1.0 + 1.5), -0.5]
        np.testing.assert_allclose(out, expected, rtol=1e-15)

    def test_blowup_limit_scales_with_data(self):
        ctl = SolverControls()
        assert blowup_limit(ctl, 0.5, -0.25) == 1e8
        assert blowup_limit(ctl, 4.0, -1.0) == pytest.approx(8e8)
        assert blowup_limit(ctl, 1.0, -9.0) == pytest.approx(27e8)


class TestDopri:

    def test_continuous_extension_endpoints(self):
        fun = lambda y: (y[1], y[2], -y[0] * y[2] - 0.5 * y[1] * y[1])  # noqa: E731
        y = (0.0, 1.0, -1.0)
        y_new, _, _, rcont = dopri.step(fun, y, fun(y), 0.1)
        assert dopri.dense_eval(rcont, 0.0) == pytest.approx(y, abs=1e-15)
        assert dopri.dense_eval(rcont, 1.0) == pytest.approx(y_new, abs=1e-15)

    def test_initial_step_floor(self):
        fun = lambda y: (y[1], y[2], -y[0] * y[2] - y[1] * y[1])  # noqa: E731
        y = (-1.0, 4.5e7, -1.0)
        h_min = constants.INITIAL_STEP_FRACTION * time_scale(y[1], y[2])
        assert dopri.initial_step(fun, y, fun(y), 1e-10, 1e-10, 200.0) < h_min
        assert dopri.initial_step(fun, y, fun(y), 1e-10, 1e-10, 200.0, h_min) == h_min

    def test_time_scale(self):
        assert time_scale(0.5, -0.25) == 1.0
        assert time_scale(1e8, -1.0) == pytest.approx(1e-4)
        assert time_scale(1.0, -1e9) == pytest.approx(1e-3)

    def test_fifth_order_on_exponential(self):
        # y' = y for every component: one step of size h has error O(h^6)
        fun = lambda y: tuple(y)  # noqa: E731
        errors = []
        for h in (0.1, 0.05):
            y_new, _, _, _ = dopri.step(fun, (1.0, 1.0, 1.0), (1.0, 1.0, 1.0), h)
            errors.append(abs(y_new[0] - math.exp(h)))
        assert errors[1] < errors[0] / 40.0


class TestIntegrate:

    def test_oracle_closed_form(self, oracle_problem):
        traj = integrate(oracle_problem, -0.5)
        assert traj.termination.kind is TerminationKind.REACHED_TMAX
        assert traj.t_final == 0.9
        ts = np.linspace(0.0, 0.9, 181)
        Y = traj.evaluate(ts)
        np.testing.assert_allclose(Y[:, 0], np.sqrt(1.0 - ts), atol=1e-7)
        np.testing.assert_allclose(Y[:, 1], -0.5 / np.sqrt(1.0 - ts), atol=1e-7)

    def test_tolerance_halving_study(self, oracle_problem):
        ts = np.linspace(0.0, 0.9, 181)
        exact = np.sqrt(1.0 - ts)
        steps, errors = [], []
        for k in range(8):
            tol = 1e-6 / 2 ** k
            problem = oracle_problem.with_controls(
                SolverControls(t_max=0.9, abs_tol=tol, rel_tol=tol))
            traj = integrate(problem, -0.5)
            steps.append(traj.steps)
            errors.append(float(np.max(np.abs(traj.evaluate(ts)[:, 0] - exact))))
        assert all(e1 <= e0 for e0, e1 in zip(errors, errors[1:]))
        order = -np.polyfit(np.log(steps), np.log(errors), 1)[0]
        assert order >= 4.5

    def test_oracle_blows_up_at_one(self, oracle_problem):
        problem = oracle_problem.with_controls(SolverControls(t_max=2.0))
        traj = integrate(problem, -0.5)
        assert traj.termination.kind is TerminationKind.BLOW_UP
        assert 0.99 < traj.termination.t < 1.01
        assert traj.zero_crossing == 0.0

    def test_zero_slope_stops_immediately(self, quadratic_problem):
        traj = integrate(quadratic_problem(), 0.0)
        assert traj.termination.kind is TerminationKind.ZERO_CROSSING
        assert traj.termination.t == 0.0
        assert traj.zero_crossing == 0.0
        assert len(traj.t) == 1
        assert traj.steps == 0

    def test_negative_slope_integrates_through(self, quadratic_problem):
        traj = integrate(quadratic_problem(), -0.5)
        assert traj.zero_crossing == 0.0
        assert traj.termination.kind is TerminationKind.BLOW_UP
        assert traj.fp[-1] < 0.0

    def test_crossing_is_localized(self, quadratic_problem):
        problem = quadratic_problem(beta=1.0)
        traj = integrate(problem, 1.0)
        assert traj.termination.kind is TerminationKind.ZERO_CROSSING
        assert traj.t_final == traj.zero_crossing == traj.termination.t
        assert abs(traj.fp[-1]) <= 1e-9
        assert np.all(traj.fp[:-1] > 0.0)

    def test_through_crossing_continues_to_blowup(self, quadratic_problem):
        problem = quadratic_problem(beta=1.0)
        stopped = integrate(problem, 1.0)
        traj = integrate(problem, 1.0, through_crossing=True)
        assert traj.zero_crossing == pytest.approx(stopped.zero_crossing, abs=1e-10)
        assert traj.termination.kind is TerminationKind.BLOW_UP
        assert traj.t_final > stopped.t_final

    def test_max_steps_truncates(self, quadratic_problem):
        traj = integrate(quadratic_problem(max_steps=5), 3.0)
        assert traj.termination.kind is TerminationKind.STEP_UNDERFLOW
        assert traj.steps == 5
        assert traj.t_final < 200.0

    @pytest.mark.parametrize("b", [4.5e7, 1e12, 5e18])
    def test_large_slope_reaches_crossing(self, quadratic_problem, b):
        traj = integrate(quadratic_problem(beta=1.0, a=-1.0, c=-1.0), b)
        assert traj.steps > 0
        assert traj.termination.kind is TerminationKind.ZERO_CROSSING
        # crossing time scales like b^(-1/2)
        assert 0.1 < traj.zero_crossing * math.sqrt(b) < 10.0

    def test_time_strictly_increasing(self, quadratic_problem):
        traj = integrate(quadratic_problem(), 3.0)
        assert np.all(np.diff(traj.t) > 0.0)
        assert traj.t[0] == 0.0
        assert tuple(traj.y[0]) == (0.0, 3.0, -1.0)

    def test_concave_along_trajectory(self, quadratic_problem):
        traj = integrate(quadratic_problem(a=1.0, t_max=5.0), 2.0)
        assert np.all(traj.fpp < 0.0)

    def test_agrees_with_rk4(self, quadratic_problem):
        problem = quadratic_problem(t_max=0.5)
        traj = integrate(problem, 5.0)
        assert traj.termination.kind is TerminationKind.REACHED_TMAX
        np.testing.assert_allclose(traj.y[-1], rk4_state_at(problem, 5.0, 0.5, h=1e-4),
                                   rtol=1e-8, atol=1e-9)

    def test_deterministic(self, quadratic_problem):
        a = integrate(quadratic_problem(), 2.0)
        b = integrate(quadratic_problem(), 2.0)
        np.testing.assert_array_equal(a.t, b.t)
        np.testing.assert_array_equal(a.y, b.y)


class TestSample:

    def test_sample_at_node_is_exact(self, oracle_problem):
        traj = integrate(oracle_problem, -0.5)
        k = len(traj.t) // 2
        s = sample(traj, float(traj.t[k]))
        assert (s.f, s.fp, s.fpp) == tuple(traj.y[k])

    @pytest.mark.parametrize("t", [-0.1, 0.95])
    def test_sample_out_of_range(self, oracle_problem, t):
        traj = integrate(oracle_problem, -0.5)
        with pytest.raises(OutOfRange):
            sample(traj, t)

    def test_sample_matches_closed_form(self, oracle_problem):
        traj = integrate(oracle_problem, -0.5)
        s = sample(traj, 0.75)
        assert s.f == pytest.approx(0.5, abs=1e-7)
        assert s.fp == pytest.approx(-1.0, abs=1e-7)
        assert s.fpp == pytest.approx(-2.0, abs=1e-6)


class TestRk4Oracle:

    def test_make_rk4_exact_for_quadratic_motion(self):
        # f''' = 0: the exact solution is quadratic in t
        advance = make_rk4(lambda f, p, q: (p, q, 0.0))
        f, p, q = advance(0.0, 1.0, 2.0, 0.5)
        assert (f, p, q) == pytest.approx((0.5 + 0.25, 1.0 + 1.0, 2.0))

    def test_rk4_integrate_oracle(self, oracle_problem):
        t, y = rk4_integrate(oracle_problem, -0.5, 0.5, h=1e-3)
        assert t[-1] == pytest.approx(0.5)
        assert y[-1, 0] == pytest.approx(math.sqrt(0.5), abs=1e-9)

    def test_rk4_stop_at_crossing(self, quadratic_problem):
        t, y = rk4_integrate(quadratic_problem(beta=1.0), 1.0, 10.0, h=1e-3,
                             stop_at_crossing=True)
        assert y[-1, 1] <= 0.0
        assert np.all(y[:-1, 1] > 0.0)
        assert t[-1] < 10.0

    def test_matches_problem_spec_data(self):
        problem = ProblemSpec(a=2.0, c=-3.0, g=GSpec.quadratic(0.25))
        _, y = rk4_integrate(problem, 1.5, 0.01, h=0.01)
        assert tuple(y[0]) == (2.0, 1.5, -3.0)
