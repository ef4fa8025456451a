"""The v-chart of a Type I trajectory.

With y = f'(t)^2 / b^2 the trajectory is rewritten as

    f = sqrt(b) v(y),  f' = b sqrt(y),  f'' = b^(3/2) / (2 v'(y))

and v solves

    v'' = v v'^2 / sqrt(y) + 2 beta sqrt(y) v'^3   on (0, 1]
"""

import math
from typing import List, Optional

import numpy as np

from src.model import (
    CheckResult,
    NonMonotoneY,
    OutOfRange,
    TooFewSamples,
    Trajectory,
    VProfile,
)

MIN_SAMPLES = 16
DEFAULT_Y_FLOOR = 1e-10


def v_transform(traj: Trajectory, max_dt: Optional[float] = None,
                y_floor: float = DEFAULT_Y_FLOOR) -> VProfile:
    """Sample traj on its dense grid and map each sample to (y, v, v').

    Samples with y below y_floor are dropped; past that point f' sits at
    the bracket-noise level and carries no information about v.

    Raises:
        OutOfRange: b <= 0
        NonMonotoneY: f' not strictly decreasing over the retained samples
    """
    b = traj.b
    if b <= 0.0:
        raise OutOfRange(f"v-chart needs b > 0, got b={b}")
    ts, Y = traj.dense_grid(max_dt=max_dt)
    f, fp, fpp = Y[:, 0], Y[:, 1], Y[:, 2]
    y = (fp / b) ** 2

    keep = (fp > 0.0) & (y >= y_floor)
    # only the leading run: f' may not come back up
    stop = np.argmin(keep) if not keep.all() else len(keep)
    f, fp, fpp, y = f[:stop], fp[:stop], fpp[:stop], y[:stop]

    bad = np.nonzero(np.diff(fp) >= 0.0)[0]
    if len(bad):
        i = bad[0]
        raise NonMonotoneY(
            f"f' not strictly decreasing at t={ts[i + 1]:.10g} "
            f"({fp[i]:.17g} -> {fp[i + 1]:.17g})"
        )
    return VProfile(
        b=b,
        a=traj.problem.a,
        y=y,
        v=f / math.sqrt(b),
        vp=b ** 1.5 / (2.0 * fpp),
    )


def v_ode_residual(profile: VProfile, beta: float, y_min: float = 1e-4,
                   y_max: float = 1.0) -> float:
    """Scaled residual of the v equation over y in [y_min, y_max].

    v'' comes from second-order central differences of the sampled v' on
    the nonuniform y grid (numpy.gradient); at each interior sample

        |v'' - T1 - T2| / (1 + |T1| + |T2|),
        T1 = v v'^2 / sqrt(y),  T2 = 2 beta sqrt(y) v'^3

    and the maximum is returned.

    Raises:
        TooFewSamples: fewer than 16 samples in the profile or in the range
    """
    if len(profile) < MIN_SAMPLES:
        raise TooFewSamples(f"{len(profile)} samples, need at least {MIN_SAMPLES}")
    order = np.argsort(profile.y)
    y = profile.y[order]
    v = profile.v[order]
    vp = profile.vp[order]

    vpp = np.gradient(vp, y, edge_order=2)
    sy = np.sqrt(y)
    t1 = v * vp * vp / sy
    t2 = 2.0 * beta * sy * vp ** 3
    scaled = np.abs(vpp - t1 - t2) / (1.0 + np.abs(t1) + np.abs(t2))

    interior = np.zeros(len(y), dtype=bool)
    interior[1:-1] = True
    mask = interior & (y >= y_min) & (y <= y_max)
    if np.count_nonzero(mask) < MIN_SAMPLES:
        raise TooFewSamples(
            f"{np.count_nonzero(mask)} interior samples in [{y_min:g}, {y_max:g}]"
        )
    return float(np.max(scaled[mask]))


def v_limit_check(profile: VProfile, mu: float, tol: float = 0.1) -> List[CheckResult]:
    """Limits at the smallest sampled y.

    v(y) -> mu / sqrt(b) and v'(y) sqrt(y) -> -sqrt(b) / (2 mu), each
    reported as a relative error against tol.
    """
    i = int(np.argmin(profile.y))
    b = profile.b
    sb = math.sqrt(b)

    v_target = mu / sb
    v_err = abs(profile.v[i] - v_target) / abs(v_target)
    slope = profile.vp[i] * math.sqrt(profile.y[i])
    slope_target = -sb / (2.0 * mu)
    slope_err = abs(slope - slope_target) / abs(slope_target)
    return [
        CheckResult.of("v_limit", v_err <= tol,
                       f"v={profile.v[i]:.10g} target={v_target:.10g} at y={profile.y[i]:.3g}",
                       value=v_err),
        CheckResult.of("v_slope_limit", slope_err <= tol,
                       f"v' sqrt(y)={slope:.10g} target={slope_target:.10g}",
                       value=slope_err),
    ]
