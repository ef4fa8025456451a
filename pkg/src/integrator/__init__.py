"""Adaptive Runge-Kutta integration of the shooting IVP.

- dopri.py: Dormand-Prince 5(4) tableau, trial step, continuous extension
- solver.py: rhs, integrate, sample
- oracle.py: fixed-step RK4 cross-check
"""

from .solver import (
    Derivative, rhs, integrate, sample, third_derivative, blowup_limit, time_scale,
)
from .oracle import make_rk4, rk4_integrate, rk4_state_at, oracle_classify, oracle_bstar

__all__ = [
    'Derivative', 'rhs', 'integrate', 'sample', 'third_derivative', 'blowup_limit',
    'time_scale',
    'make_rk4', 'rk4_integrate', 'rk4_state_at', 'oracle_classify', 'oracle_bstar',
]
