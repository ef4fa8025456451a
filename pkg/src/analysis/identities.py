"""Integral identities obtained by integrating the equation against 1, f and t.

With h(x) = x^2 - g(x), every solution satisfies

    1:  f'' - c + f f' - a b                            = int_0^t h(f')
    2:  f f'' - a c - f'^2/2 + b^2/2 + f^2 f' - a^2 b   = int_0^t f (f'^2 + h(f'))
    3:  t f'' - f' + b + t f f' - f^2/2 + a^2/2         = int_0^t s h(f'(s)) ds

The right-hand sides are integrated with composite Simpson on the dense
output, so the residual measures integration error only.
"""

from typing import Optional, Sequence

import numpy as np
from scipy.integrate import simpson

from src import constants
from src.model import (
    CheckResult,
    GKind,
    Trajectory,
    UnsupportedNonlinearity,
    g_eval,
)

IDENTITIES = (1, 2, 3)


def _integrand(which: int, g, t, Y):
    f, fp = Y[..., 0], Y[..., 1]
    h = fp * fp - g_eval(g, fp)
    if which == 1:
        return h
    if which == 2:
        return f * (fp * fp + h)
    return t * h


def _lhs(which: int, a: float, b: float, c: float, t, Y):
    f, fp, fpp = Y[..., 0], Y[..., 1], Y[..., 2]
    if which == 1:
        return fpp - c + f * fp - a * b
    if which == 2:
        return f * fpp - a * c - 0.5 * fp * fp + 0.5 * b * b + f * f * fp - a * a * b
    return t * fpp - fp + b + t * f * fp - 0.5 * f * f + 0.5 * a * a


def _simpson_panels(traj: Trajectory, which: int, left: np.ndarray,
                    right: np.ndarray, per_step: int) -> np.ndarray:
    """Simpson integral of the integrand over each [left[i], right[i]]."""
    out = np.zeros(len(left))
    width = right - left
    live = width > 0.0
    if not np.any(live):
        return out
    frac = np.linspace(0.0, 1.0, per_step + 1)
    x = left[live, None] + width[live, None] * frac[None, :]
    Y = traj.evaluate(x.ravel()).reshape(x.shape + (3,))
    vals = _integrand(which, traj.problem.g, x, Y)
    out[live] = simpson(vals, x=x, axis=-1)
    return out


def identity_residuals(traj: Trajectory, which: int,
                       times: Optional[Sequence[float]] = None,
                       per_step: int = constants.DENSE_PER_STEP) -> float:
    """Scaled residual of one identity along traj.

    Args:
        traj: any trajectory
        which: 1, 2 or 3 (multiplier 1, f or t)
        times: evaluation times; RESIDUAL_POINTS equally spaced on
            [0, t_final] by default
        per_step: Simpson sub-panels per accepted step (even)

    Returns:
        max |LHS - RHS| / (1 + max |LHS|)
    """
    if which not in IDENTITIES:
        raise ValueError(f"which must be one of {IDENTITIES}, got {which!r}")
    if times is None:
        times = np.linspace(0.0, traj.t_final, constants.RESIDUAL_POINTS)
    times = np.asarray(times, dtype=float)
    p = traj.problem

    t = traj.t
    seg = _simpson_panels(traj, which, t[:-1], t[1:], per_step)
    cumulative = np.concatenate([[0.0], np.cumsum(seg)])

    k = np.clip(np.searchsorted(t, times, side="right") - 1, 0, max(len(t) - 2, 0))
    partial = _simpson_panels(traj, which, t[k], times, per_step)
    rhs = cumulative[k] + partial

    lhs = _lhs(which, p.a, traj.b, p.c, times, traj.evaluate(times))
    return float(np.max(np.abs(lhs - rhs)) / (1.0 + np.max(np.abs(lhs))))


def first_integral_residual(traj: Trajectory) -> float:
    """max |f' + f^2/2 - b - a^2/2 - (c + a b) t| for g(x) = x^2.

    Raises:
        UnsupportedNonlinearity: g is not x^2
    """
    g = traj.problem.g
    if not (g.kind is GKind.QUADRATIC and g.beta == 1.0):
        raise UnsupportedNonlinearity(f"first integral needs g(x) = x^2, got {g.describe()}")
    a, c, b = traj.problem.a, traj.problem.c, traj.b
    ts, Y = traj.dense_grid()
    drift = Y[:, 1] + 0.5 * Y[:, 0] ** 2 - b - 0.5 * a * a - (c + a * b) * ts
    return float(np.max(np.abs(drift)))


def concavity_check(traj: Trajectory) -> CheckResult:
    """f'' < 0 on the sampled trajectory (c < 0 and g >= 0 force concavity)."""
    _, Y = traj.dense_grid()
    top = float(np.max(Y[:, 2]))
    return CheckResult.of("concavity", top < 0.0, f"max f''={top:.6g}", value=top)
