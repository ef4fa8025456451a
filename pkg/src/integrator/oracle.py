"""Fixed-step classical RK4 oracle.

Independent of the adaptive solver: no error control, no dense output, no
event localization. Used to cross-check integrate() and find_bstar().
"""

from typing import Tuple

import numpy as np

from src.model import ClassKind, ProblemSpec
from src.utils import print_debug


def make_rk4(fun):
    """Classical RK4 advance (f, p, q, h) -> (f, p, q) for a 3-component system."""

    def advance(f, p, q, h):
        a1, b1, c1 = fun(f, p, q)
        a2, b2, c2 = fun(f + 0.5 * h * a1, p + 0.5 * h * b1, q + 0.5 * h * c1)
        a3, b3, c3 = fun(f + 0.5 * h * a2, p + 0.5 * h * b2, q + 0.5 * h * c2)
        a4, b4, c4 = fun(f + h * a3, p + h * b3, q + h * c3)
        return (
            f + h / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4),
            p + h / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4),
            q + h / 6.0 * (c1 + 2 * c2 + 2 * c3 + c4),
        )
    return advance


def _rk4_stepper(g):
    gfun = g.scalar_fn()
    return make_rk4(lambda f, p, q: (p, q, -f * q - gfun(p)))


def rk4_integrate(problem: ProblemSpec, b: float, t_end: float, h: float = 1e-4,
                  stop_at_crossing: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """Integrate with n = round(t_end / h) equal steps.

    Returns:
        (t, y) with y of shape (len(t), 3); stops early after the first step
        that ends with f' <= 0 when stop_at_crossing is set.
    """
    n = max(1, int(round(t_end / h)))
    h = t_end / n
    advance = _rk4_stepper(problem.g)
    f, p, q = float(problem.a), float(b), float(problem.c)
    ts, ys = [0.0], [(f, p, q)]
    for i in range(1, n + 1):
        f, p, q = advance(f, p, q, h)
        ts.append(i * h)
        ys.append((f, p, q))
        if stop_at_crossing and p <= 0.0:
            break
    return np.asarray(ts), np.asarray(ys)


def rk4_state_at(problem: ProblemSpec, b: float, t: float, h: float = 1e-4) -> np.ndarray:
    """(f, f', f'') at t by fixed-step RK4 landing exactly on t."""
    _, ys = rk4_integrate(problem, b, t, h)
    return ys[-1]


def oracle_classify(problem: ProblemSpec, b: float, t_end: float = 100.0,
                    h: float = 5e-3) -> ClassKind:
    """Type II if f' reaches 0 before t_end, otherwise Type I."""
    if b <= 0.0:
        return ClassKind.TYPE_II
    advance = _rk4_stepper(problem.g)
    f, p, q = float(problem.a), float(b), float(problem.c)
    for _ in range(int(round(t_end / h))):
        f, p, q = advance(f, p, q, h)
        if p <= 0.0:
            return ClassKind.TYPE_II
    return ClassKind.TYPE_I


def oracle_bstar(problem: ProblemSpec, b_min: float, b_max: float, n_scan: int = 64,
                 tol: float = 1e-10, t_end: float = 100.0,
                 h: float = 5e-3) -> Tuple[float, float]:
    """Coarse scan of [b_min, b_max] then bisection on the first flip.

    Returns:
        (b_lo, b_hi) with b_lo Type II, b_hi Type I and b_hi - b_lo <= tol
    """
    grid = np.linspace(b_min, b_max, n_scan)
    kinds = [oracle_classify(problem, b, t_end, h) for b in grid]
    flips = [i for i in range(1, n_scan)
             if kinds[i - 1] is ClassKind.TYPE_II and kinds[i] is ClassKind.TYPE_I]
    if not flips:
        raise ValueError(f"oracle scan of [{b_min}, {b_max}] found no II -> I flip")
    lo, hi = float(grid[flips[0] - 1]), float(grid[flips[0]])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if oracle_classify(problem, mid, t_end, h) is ClassKind.TYPE_I:
            hi = mid
        else:
            lo = mid
    print_debug(f"oracle bracket [{lo:.17g}, {hi:.17g}]", level=2)
    return lo, hi
