"""Dormand-Prince 5(4) pair with its 4th-order continuous extension.

Seven stages, FSAL (the last stage of an accepted step is the first stage
of the next). The state is the three floats (f, f', f''), kept as plain
tuples: for a system this small, numpy per-stage overhead dominates.
"""

import math
from typing import Callable, Tuple

State = Tuple[float, float, float]

# Butcher tableau
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9

A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84

# b - b_hat, local truncation error estimate
E1, E3, E4, E5, E6, E7 = (71 / 57600, -71 / 16695, 71 / 1920,
                          -17253 / 339200, 22 / 525, -1 / 40)

# Continuous extension
D1 = -12715105075 / 11282082432
D3 = 87487479700 / 32700410799
D4 = -10690763975 / 1880347072
D5 = 701980252875 / 199316789632
D6 = -1453857185 / 822651844
D7 = 69997945 / 29380423

ORDER = 5


def step(fun: Callable[[State], State], y: State, k1: State, h: float):
    """Take one trial step of size h from y, with k1 = fun(y).

    Returns (y_new, k7, err, rcont) where err is the per-component local
    error estimate and rcont the five continuous-extension coefficient
    vectors (see src.model.trajectory).
    """
    k2 = fun(tuple(v + h * A21 * p for v, p in zip(y, k1)))
    k3 = fun(tuple(v + h * (A31 * p + A32 * q) for v, p, q in zip(y, k1, k2)))
    k4 = fun(tuple(v + h * (A41 * p + A42 * q + A43 * r)
                   for v, p, q, r in zip(y, k1, k2, k3)))
    k5 = fun(tuple(v + h * (A51 * p + A52 * q + A53 * r + A54 * s)
                   for v, p, q, r, s in zip(y, k1, k2, k3, k4)))
    k6 = fun(tuple(v + h * (A61 * p + A62 * q + A63 * r + A64 * s + A65 * u)
                   for v, p, q, r, s, u in zip(y, k1, k2, k3, k4, k5)))
    y_new = tuple(v + h * (B1 * p + B3 * r + B4 * s + B5 * u + B6 * w)
                  for v, p, r, s, u, w in zip(y, k1, k3, k4, k5, k6))
    k7 = fun(y_new)

    err = tuple(h * (E1 * p + E3 * r + E4 * s + E5 * u + E6 * w + E7 * z)
                for p, r, s, u, w, z in zip(k1, k3, k4, k5, k6, k7))

    ydiff = tuple(b - a for a, b in zip(y, y_new))
    bspl = tuple(h * p - d for p, d in zip(k1, ydiff))
    rcont = (
        y,
        ydiff,
        bspl,
        tuple(d - h * z - s for d, z, s in zip(ydiff, k7, bspl)),
        tuple(h * (D1 * p + D3 * r + D4 * s + D5 * u + D6 * w + D7 * z)
              for p, r, s, u, w, z in zip(k1, k3, k4, k5, k6, k7)),
    )
    return y_new, k7, err, rcont


def error_norm(err: State, y: State, y_new: State, abs_tol: float, rel_tol: float) -> float:
    """RMS of err scaled by abs_tol + rel_tol * max(|y|, |y_new|)."""
    total = 0.0
    for e, a, b in zip(err, y, y_new):
        sc = abs_tol + rel_tol * max(abs(a), abs(b))
        total += (e / sc) ** 2
    return math.sqrt(total / 3.0)


def dense_eval(rcont, theta: float) -> State:
    """Evaluate the continuous extension at theta in [0, 1]."""
    r1, r2, r3, r4, r5 = rcont
    s = 1.0 - theta
    return tuple(
        r1[i] + theta * (r2[i] + s * (r3[i] + theta * (r4[i] + s * r5[i])))
        for i in range(3)
    )


def initial_step(fun: Callable[[State], State], y: State, k1: State,
                 abs_tol: float, rel_tol: float, t_span: float,
                 h_min: float = 0.0) -> float:
    """Starting step size from the local scale of y and y', at least h_min."""
    sc = [abs_tol + rel_tol * abs(v) for v in y]
    d0 = math.sqrt(sum((v / s) ** 2 for v, s in zip(y, sc)) / 3.0)
    d1 = math.sqrt(sum((v / s) ** 2 for v, s in zip(k1, sc)) / 3.0)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, t_span)

    y1 = tuple(v + h0 * k for v, k in zip(y, k1))
    k2 = fun(y1)
    d2 = math.sqrt(sum(((b - a) / s) ** 2 for a, b, s in zip(k1, k2, sc)) / 3.0) / h0
    if not math.isfinite(d2):
        return max(h_min, h0)
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / ORDER)
    return max(h_min, min(100 * h0, h1, t_span))
