"""Shooting IVP integration: f''' + f f'' + g(f') = 0, (f, f', f'')(0) = (a, b, c).

The third-order equation is reduced to the first-order system

    f' = fp,   fp' = fpp,   fpp' = -f fpp - g(fp)

and advanced with the adaptive Dormand-Prince pair until one of:
- t reaches t_max
- f' crosses zero downward (localized on the continuous extension)
- |f'| + |f''| exceeds the blow-up threshold
- the step size underflows (trajectory returned truncated)
"""

import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src import constants
from src.model import (
    GSpec,
    OutOfRange,
    ProblemSpec,
    ShootState,
    Termination,
    TerminationKind,
    Trajectory,
    g_eval,
)
from src.utils import print_debug, print_warning

from . import dopri

_EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class Derivative:
    """Right-hand side of the first-order system; dfpp houses f'''."""

    df: float
    dfp: float
    dfpp: float


def rhs(state: ShootState, g: GSpec) -> Derivative:
    """Derivative of (f, f', f'') at state."""
    return Derivative(
        state.fp,
        state.fpp,
        -state.f * state.fpp - g_eval(g, state.fp),
    )


def third_derivative(g: GSpec, f, fp, fpp):
    """f''' from the equation, for floats or numpy arrays."""
    return -f * fpp - g_eval(g, fp)


def _system(g: GSpec):
    gfun = g.scalar_fn()

    def fun(y):
        f, fp, fpp = y
        return (fp, fpp, -f * fpp - gfun(fp))
    return fun


def blowup_limit(controls, b: float, c: float) -> float:
    """Blow-up threshold on |f'| + |f''|, scaled with the initial data.

    Under f -> lam f(lam t) the pair (f', f'') scales as (lam^2, lam^3), so
    for |b| or |c| above 1 the threshold grows with max(|b|, |c|)^(3/2).
    """
    return controls.blowup_threshold * max(1.0, abs(b), abs(c)) ** 1.5


def time_scale(b: float, c: float) -> float:
    """Characteristic time of the initial layer, 1 / max(1, |b|^(1/2), |c|^(1/3))."""
    return 1.0 / max(1.0, math.sqrt(abs(b)), abs(c) ** (1.0 / 3.0))


def _locate_crossing(rcont, h: float, event_tol: float) -> float:
    """Bisection for the f' downcrossing inside one step; returns theta."""
    lo, hi = 0.0, 1.0
    fp_lo = dopri.dense_eval(rcont, lo)[1]
    fp_hi = dopri.dense_eval(rcont, hi)[1]
    for _ in range(200):
        if (hi - lo) * h <= event_tol and min(abs(fp_lo), abs(fp_hi)) <= event_tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fp_mid = dopri.dense_eval(rcont, mid)[1]
        if fp_mid > 0:
            lo, fp_lo = mid, fp_mid
        else:
            hi, fp_hi = mid, fp_mid
    if lo > 0.0 and abs(fp_lo) < abs(fp_hi):
        return lo
    return hi


def integrate(problem: ProblemSpec, b: float, through_crossing: bool = False) -> Trajectory:
    """Integrate P(g; a, b, c) forward from t = 0.

    Args:
        problem: (a, c, g) and solver controls
        b: shooting slope f'(0)
        through_crossing: keep integrating past the first f' downcrossing
            (recorded in Trajectory.zero_crossing) instead of stopping there

    Returns:
        Trajectory; a step-size underflow yields a truncated trajectory with
        termination kind STEP_UNDERFLOW rather than an exception.
    """
    ctl = problem.controls
    b = float(b)
    fun = _system(problem.g)
    t_max = ctl.t_max
    limit = blowup_limit(ctl, b, problem.c)

    t = 0.0
    y = (float(problem.a), b, float(problem.c))
    ts, ys, rconts, hs = [t], [y], [], []
    rejected = 0
    zero_crossing: Optional[float] = None
    termination: Optional[Termination] = None

    # f' already nonpositive at t = 0: B2 contains (-inf, 0]
    if b <= 0.0:
        zero_crossing = 0.0
        if b == 0.0 and not through_crossing:
            termination = Termination(TerminationKind.ZERO_CROSSING, 0.0)

    k1 = fun(y)
    h_min = min(t_max, constants.INITIAL_STEP_FRACTION * time_scale(b, problem.c))
    h = ctl.h_init or dopri.initial_step(fun, y, k1, ctl.abs_tol, ctl.rel_tol, t_max, h_min)
    last_rejected = False

    while termination is None:
        if t >= t_max:
            termination = Termination(TerminationKind.REACHED_TMAX, t)
            break
        if len(hs) >= ctl.max_steps:
            print_warning(f"b={b:.17g}: max_steps={ctl.max_steps} reached at t={t:.6g}")
            termination = Termination(TerminationKind.STEP_UNDERFLOW, t)
            break

        clipped = h >= t_max - t
        if clipped:
            h = t_max - t
        if h < 16 * _EPS * max(1.0, abs(t)):
            if clipped:
                # t_max is within rounding of t
                termination = Termination(TerminationKind.REACHED_TMAX, t)
                break
            print_warning(f"b={b:.17g}: step size underflow at t={t:.17g}")
            termination = Termination(TerminationKind.STEP_UNDERFLOW, t)
            break

        y_new, k7, err, rcont = dopri.step(fun, y, k1, h)
        if all(math.isfinite(v) for v in y_new):
            err_norm = dopri.error_norm(err, y, y_new, ctl.abs_tol, ctl.rel_tol)
        else:
            err_norm = math.inf

        if err_norm > 1.0:
            rejected += 1
            last_rejected = True
            factor = constants.MIN_FACTOR
            if math.isfinite(err_norm):
                factor = max(constants.MIN_FACTOR, constants.SAFETY * err_norm ** (-1.0 / dopri.ORDER))
            print_debug(f"reject t={t:.6g} h={h:.3g} err={err_norm:.3g}", level=6)
            h *= factor
            continue

        t_new = t_max if clipped else t + h
        rconts.append(rcont)
        hs.append(h)

        if y[1] > 0.0 >= y_new[1] and zero_crossing is None:
            theta = _locate_crossing(rcont, h, ctl.event_tol)
            t0 = t + theta * h
            zero_crossing = t0
            if not through_crossing:
                ts.append(t0)
                ys.append(dopri.dense_eval(rcont, theta))
                termination = Termination(TerminationKind.ZERO_CROSSING, t0)
                break

        ts.append(t_new)
        ys.append(y_new)
        t, y, k1 = t_new, y_new, k7

        if abs(y[1]) + abs(y[2]) > limit:
            termination = Termination(TerminationKind.BLOW_UP, t)
            break

        if err_norm == 0.0:
            factor = constants.MAX_FACTOR
        else:
            factor = constants.SAFETY * err_norm ** (-1.0 / dopri.ORDER)
        factor = min(constants.MAX_FACTOR, max(constants.MIN_FACTOR, factor))
        if last_rejected:
            factor = min(1.0, factor)
        last_rejected = False
        h *= factor

    print_debug(
        f"integrate b={b:.17g}: {termination}, {len(hs)} steps, {rejected} rejected",
        level=3,
    )
    return Trajectory(
        problem=problem,
        b=b,
        t=np.asarray(ts, dtype=float),
        y=np.asarray(ys, dtype=float).reshape(-1, 3),
        rcont=np.asarray(rconts, dtype=float).reshape(-1, 5, 3),
        h=np.asarray(hs, dtype=float),
        termination=termination,
        zero_crossing=zero_crossing,
        steps_rejected=rejected,
    )


def sample(traj: Trajectory, t: float) -> ShootState:
    """State at t from the dense output; nodes are returned exactly.

    Raises:
        OutOfRange: t outside [0, traj.t_final]
    """
    if not (0.0 <= t <= traj.t_final):
        raise OutOfRange(f"t={t!r} outside [0, {traj.t_final:.17g}]")
    return traj.state_at(t)
