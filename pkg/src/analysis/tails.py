"""Tail laws of Type I trajectories.

Bounded (b = b_*):   f(t) = mu - A exp(-mu t (1 + o(1))),  f'' ~ -mu f'
Unbounded (b > b_*): f(t) ~ A t^(1 / (1 + beta))
"""

import numpy as np

from src import constants
from src.model import TailFit, Trajectory, WindowEmpty

_MIN_WINDOW = 3


def fit_exponential_tail(traj: Trajectory, lo: float = constants.TAIL_WINDOW_LO,
                         hi: float = constants.TAIL_WINDOW_HI) -> TailFit:
    """Fit the exponential approach to the plateau.

    mu_hat is the final value of f; rate_hat the median of -f''/f' where
    lo <= f' <= hi; A_hat from the least-squares line of log(mu_hat - f)
    against -mu_hat t on the same window.

    Raises:
        WindowEmpty: fewer than three dense samples with f' in [lo, hi]
    """
    ts, Y = traj.dense_grid()
    f, fp, fpp = Y[:, 0], Y[:, 1], Y[:, 2]
    mu_hat = float(f[-1])

    window = (fp >= lo) & (fp <= hi) & (mu_hat - f > 0.0)
    if np.count_nonzero(window) < _MIN_WINDOW:
        raise WindowEmpty(
            f"f' enters [{lo:g}, {hi:g}] at fewer than {_MIN_WINDOW} samples "
            f"before t={traj.t_final:.6g}"
        )
    tw = ts[window]
    rate_hat = float(np.median(-fpp[window] / fp[window]))

    x = -mu_hat * tw
    z = np.log(mu_hat - f[window])
    (slope, intercept), residuals, *_ = np.polyfit(x, z, 1, full=True)
    residual_norm = float(np.sqrt(residuals[0] / len(x))) if len(residuals) else 0.0
    return TailFit(
        mu_hat=mu_hat,
        A_hat=float(np.exp(intercept)),
        rate_hat=rate_hat,
        t_start=float(tw[0]),
        t_end=float(tw[-1]),
        residual_norm=residual_norm,
        target=mu_hat,
    )


def fit_power_tail(traj: Trajectory, beta: float, decades: float = 1.0) -> TailFit:
    """Slope of log f against log t over the last `decades` of time.

    The fitted exponent is compared against 1 / (1 + beta) (TailFit.target).

    Raises:
        WindowEmpty: fewer than three samples with t > 0 and f > 0 in the window
    """
    ts, Y = traj.dense_grid()
    f = Y[:, 0]
    t_end = traj.t_final
    t_start = t_end / 10.0 ** decades
    window = (ts >= t_start) & (ts > 0.0) & (f > 0.0)
    if np.count_nonzero(window) < _MIN_WINDOW:
        raise WindowEmpty(f"no positive f samples on [{t_start:.6g}, {t_end:.6g}]")

    lt, lf = np.log(ts[window]), np.log(f[window])
    (slope, intercept), residuals, *_ = np.polyfit(lt, lf, 1, full=True)
    residual_norm = float(np.sqrt(residuals[0] / len(lt))) if len(residuals) else 0.0
    return TailFit(
        mu_hat=float(f[-1]),
        A_hat=float(np.exp(intercept)),
        rate_hat=float(slope),
        t_start=float(ts[window][0]),
        t_end=float(ts[window][-1]),
        residual_norm=residual_norm,
        target=1.0 / (1.0 + beta),
    )
