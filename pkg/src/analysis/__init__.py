"""Numerical certification of identities, bounds and tail laws.

- identities.py: the three integral identities, first integral, concavity
- tails.py: exponential and power-law tail fits
- vtransform.py: the v-chart and its ODE residual
- bounds.py: pointwise bounds along a trajectory
- mform.py: the m-equation correspondence
"""

from .identities import identity_residuals, first_integral_residual, concavity_check
from .tails import fit_exponential_tail, fit_power_tail
from .vtransform import v_transform, v_ode_residual, v_limit_check
from .bounds import (
    lemma_bound_checks, seed_root, tb_lower_bound, check_upper_bound,
)
from .mform import (
    map_m_to_beta, m_form_residual, ode_residual, beta_problem, scale_factor,
    integrate_m_equation, m_form_deviation,
)

__all__ = [
    'identity_residuals', 'first_integral_residual', 'concavity_check',
    'fit_exponential_tail', 'fit_power_tail',
    'v_transform', 'v_ode_residual', 'v_limit_check',
    'lemma_bound_checks', 'seed_root', 'tb_lower_bound', 'check_upper_bound',
    'map_m_to_beta', 'm_form_residual', 'ode_residual', 'beta_problem',
    'scale_factor', 'integrate_m_equation', 'm_form_deviation',
]
