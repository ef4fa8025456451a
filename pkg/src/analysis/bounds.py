"""Pointwise bounds proved for subquadratic g, checked along a trajectory.

- (a) a < 0, b above the seed root: f reaches 0 at some s_b with f'(s_b) > 3b/4
- (b) f'(t_b) = b/2 with f(t_b) >= 0: t_b >= (c + sqrt(c^2 + b^3)) / b^2
- (c) Type II with b > 0: f(t0)^2 <= 2b + a^2 at the f' zero t0
"""

import math
from typing import Callable, List, Optional

import numpy as np
from scipy.optimize import brentq

from src.model import CheckResult, OutOfRange, TerminationKind, Trajectory


def seed_root(a: float, c: float) -> float:
    """Positive root of 7 X^2 - 32 a^2 X - 32 a c.

    Beyond it, a trajectory starting at a < 0 crosses f = 0 while f' is
    still above 3b/4.

    Raises:
        OutOfRange: a >= 0 (the root is not positive)
    """
    if not a < 0.0:
        raise OutOfRange(f"seed root needs a < 0, got a={a}")
    disc = 1024.0 * a ** 4 + 896.0 * a * c
    return (32.0 * a * a + math.sqrt(disc)) / 14.0


def tb_lower_bound(b: float, c: float) -> float:
    """Lower bound on the first time f' falls to b/2."""
    return (c + math.sqrt(c * c + b ** 3)) / (b * b)


def _first_root(values: np.ndarray, ts: np.ndarray,
                fn: Callable[[float], float]) -> Optional[float]:
    """First sign change of values (sampled at ts) refined with brentq."""
    idx = np.nonzero(np.diff(np.sign(values)) != 0)[0]
    if values[0] == 0.0:
        return float(ts[0])
    if not len(idx):
        return None
    i = idx[0]
    if values[i + 1] == 0.0:
        return float(ts[i + 1])
    return float(brentq(fn, ts[i], ts[i + 1], xtol=1e-14, rtol=4 * np.finfo(float).eps))


def check_sign_change(traj: Trajectory, grid=None) -> CheckResult:
    """Check (a) of lemma_bound_checks."""
    name = "f_zero_slope"
    a, c, b = traj.problem.a, traj.problem.c, traj.b
    if a >= 0.0:
        return CheckResult.skipped(name, "needs a < 0")
    seed = seed_root(a, c)
    if b <= seed:
        return CheckResult.skipped(name, f"b={b:.6g} not above seed root {seed:.6g}")

    ts, Y = grid if grid is not None else traj.dense_grid()
    s_b = _first_root(Y[:, 0], ts, lambda t: traj.state_at(t).f)
    if s_b is None:
        return CheckResult.skipped(name, "f does not reach 0 on the trajectory")
    if traj.zero_crossing is not None and s_b >= traj.zero_crossing:
        return CheckResult.skipped(name, "f reaches 0 only after the f' zero")
    slope = traj.state_at(s_b).fp
    return CheckResult.of(
        name, slope > 0.75 * b,
        f"s_b={s_b:.10g} f'(s_b)={slope:.10g} 3b/4={0.75 * b:.10g}",
        value=slope / b,
    )


def check_half_slope_time(traj: Trajectory, grid=None) -> CheckResult:
    """Check (b) of lemma_bound_checks."""
    name = "half_slope_time"
    b, c = traj.b, traj.problem.c
    if b <= 0.0:
        return CheckResult.skipped(name, "needs b > 0")
    ts, Y = grid if grid is not None else traj.dense_grid()
    t_b = _first_root(Y[:, 1] - 0.5 * b, ts, lambda t: traj.state_at(t).fp - 0.5 * b)
    if t_b is None:
        return CheckResult.skipped(name, "f' never reaches b/2")
    if traj.state_at(t_b).f < 0.0:
        return CheckResult.skipped(name, f"f(t_b) < 0 at t_b={t_b:.6g}")
    bound = tb_lower_bound(b, c)
    return CheckResult.of(
        name, t_b >= bound * (1.0 - 1e-9),
        f"t_b={t_b:.10g} bound={bound:.10g}",
        value=t_b - bound,
    )


def check_crossing_height(traj: Trajectory, tol: float = 1e-2) -> CheckResult:
    """Check (c) of lemma_bound_checks."""
    name = "crossing_height"
    a, b = traj.problem.a, traj.b
    t0 = traj.zero_crossing
    if t0 is None:
        return CheckResult.skipped(name, "no f' zero (Type I or truncated)")
    if b <= 0.0:
        return CheckResult.skipped(name, "needs b > 0")
    f0 = traj.state_at(t0).f
    bound = 2.0 * b + a * a
    return CheckResult.of(
        name, f0 * f0 <= bound + tol,
        f"t0={t0:.10g} f(t0)^2={f0 * f0:.10g} 2b+a^2={bound:.10g}",
        value=f0 * f0 - bound,
    )


def check_upper_bound(traj: Trajectory, b_star: float, tol: float = 1e-3) -> CheckResult:
    """f <= sqrt(2 b_* + a^2) + tol along a trajectory at the critical slope."""
    a = traj.problem.a
    bound = math.sqrt(2.0 * b_star + a * a)
    f_max = float(np.max(traj.f))
    return CheckResult.of(
        "plateau_bound", f_max <= bound + tol,
        f"max f={f_max:.10g} sqrt(2b*+a^2)={bound:.10g}",
        value=f_max - bound,
    )


def lemma_bound_checks(traj: Trajectory, tol: float = 1e-2) -> List[CheckResult]:
    """Run every applicable bound; inapplicable ones are reported as skipped."""
    if traj.termination.kind is TerminationKind.STEP_UNDERFLOW:
        return [CheckResult.skipped(name, "truncated trajectory")
                for name in ("f_zero_slope", "half_slope_time", "crossing_height")]
    grid = traj.dense_grid()
    return [
        check_sign_change(traj, grid),
        check_half_slope_time(traj, grid),
        check_crossing_height(traj, tol),
    ]
