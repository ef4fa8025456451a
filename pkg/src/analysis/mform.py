"""The m-equation  f''' + (m+2) f f'' - (2m+1) f'^2 = 0,  f''(0) = -1.

For m in (-1, -1/2), with k = sqrt(m + 2),

    F(t) = k f(t / k)

turns a solution f of the m-equation into a solution F of the
beta-equation with g(x) = beta x^2, beta = -(2m+1)/(m+2), and data
F(0) = k a, F'(0) = b, F''(0) = -1/k. Conversely f(s) = F(k s) / k, so

    f' = F',  f'' = k F'',  f''' = k^2 F'''   (evaluated at t = k s)
"""

import math
from typing import Optional

import numpy as np

from src import constants
from src.integrator import make_rk4
from src.model import GSpec, OutOfRange, ProblemSpec, SolverControls, Trajectory, g_eval


def map_m_to_beta(m: float) -> float:
    """beta = -(2m+1)/(m+2), increasing from 0 to 1 as m goes from -1/2 to -1.

    Raises:
        OutOfRange: m outside (-1, -1/2)
    """
    if not (-1.0 < m < -0.5):
        raise OutOfRange(f"m must lie in (-1, -1/2), got m={m}")
    return -(2.0 * m + 1.0) / (m + 2.0)


def scale_factor(m: float) -> float:
    """k = sqrt(m + 2)."""
    return math.sqrt(m + 2.0)


def beta_problem(m: float, a: float,
                 controls: Optional[SolverControls] = None) -> ProblemSpec:
    """The beta-problem carrying the m-problem with f(0) = a, f''(0) = -1."""
    beta = map_m_to_beta(m)
    k = scale_factor(m)
    return ProblemSpec(
        a=a * k,
        c=-1.0 / k,
        g=GSpec.quadratic(beta),
        controls=controls or SolverControls(),
    )


def m_form_samples(traj_beta: Trajectory, m: float,
                   n: int = constants.RESIDUAL_POINTS):
    """(s, f, f', f'', f''') of the m-solution on n equally spaced points.

    F''' is the time derivative of the dense output of F''.
    """
    k = scale_factor(m)
    s = np.linspace(0.0, traj_beta.t_final / k, n)
    t = np.minimum(k * s, traj_beta.t_final)
    Y = traj_beta.evaluate(t)
    F, Fp, Fpp = Y[:, 0], Y[:, 1], Y[:, 2]
    Fppp = traj_beta.derivative(t)[:, 2]
    return s, F / k, Fp, k * Fpp, k * k * Fppp


def m_form_residual(traj_beta: Trajectory, m: float) -> float:
    """Scaled residual of the m-equation on the transformed samples.

    Returns:
        max |f''' + (m+2) f f'' - (2m+1) f'^2| / (1 + |f'''| + |(m+2) f f''| + |(2m+1) f'^2|)
    """
    _, f, fp, fpp, fppp = m_form_samples(traj_beta, m)
    t1 = (m + 2.0) * f * fpp
    t2 = (2.0 * m + 1.0) * fp * fp
    scaled = np.abs(fppp + t1 - t2) / (1.0 + np.abs(fppp) + np.abs(t1) + np.abs(t2))
    return float(np.max(scaled))


def ode_residual(traj: Trajectory, n: int = constants.RESIDUAL_POINTS) -> float:
    """Scaled residual of traj's own equation f''' + f f'' + g(f') on n points."""
    ts = np.linspace(0.0, traj.t_final, n)
    Y = traj.evaluate(ts)
    f, fp, fpp = Y[:, 0], Y[:, 1], Y[:, 2]
    fppp = traj.derivative(ts)[:, 2]
    t1 = f * fpp
    t2 = g_eval(traj.problem.g, fp)
    scaled = np.abs(fppp + t1 + t2) / (1.0 + np.abs(fppp) + np.abs(t1) + np.abs(t2))
    return float(np.max(scaled))


def integrate_m_equation(m: float, a: float, b: float, s_end: float,
                         h: float = 1e-4):
    """Fixed-step RK4 solution of the m-equation with (f, f', f'')(0) = (a, b, -1).

    Returns:
        (s, y) with y of shape (len(s), 3)
    """
    mp2, tm1 = m + 2.0, 2.0 * m + 1.0
    advance = make_rk4(lambda f, p, q: (p, q, -mp2 * f * q + tm1 * p * p))
    n = max(1, int(round(s_end / h)))
    h = s_end / n
    state = (float(a), float(b), -1.0)
    ys = [state]
    for _ in range(n):
        state = advance(*state, h)
        ys.append(state)
    return np.linspace(0.0, s_end, n + 1), np.asarray(ys)


def m_form_deviation(traj_beta: Trajectory, m: float, h: float = 1e-4) -> float:
    """max |f_transformed - f_direct| against a direct RK4 run of the m-equation."""
    s, f, _, _, _ = m_form_samples(traj_beta, m)
    a = traj_beta.problem.a / scale_factor(m)
    s_direct, y_direct = integrate_m_equation(m, a, traj_beta.b, float(s[-1]), h)
    return float(np.max(np.abs(f - np.interp(s, s_direct, y_direct[:, 0]))))
