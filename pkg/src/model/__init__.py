"""Domain types for the heat-flux boundary value problem.

The structure is:
- nonlinearity.py: GSpec catalogue, g_eval, sampled subquadraticity check
- problem.py: SolverControls and ProblemSpec
- models.py: state, verdict and result dataclasses
- trajectory.py: dense trajectory record
- errors.py: error hierarchy
"""

from .errors import (
    BVPError, InvalidConfig, OutOfRange, UnsupportedNonlinearity, StepUnderflow,
    BracketFailure, MaxIterations, InconsistentPredicate, PlateauNotFound,
    WindowEmpty, NonMonotoneY, TooFewSamples,
)
from .nonlinearity import (
    GKind, GSpec, g_eval, check_subquadratic, default_grid,
    SubquadraticReport, Violation,
)
from .problem import SolverControls, ProblemSpec
from .models import (
    ShootState, Termination, TerminationKind, ClassKind, Classification,
    CheckResult, BStarResult, TailFit, VProfile, PASS, FAIL, SKIPPED,
)
from .trajectory import Trajectory

__all__ = [
    # Errors
    'BVPError', 'InvalidConfig', 'OutOfRange', 'UnsupportedNonlinearity',
    'StepUnderflow', 'BracketFailure', 'MaxIterations', 'InconsistentPredicate',
    'PlateauNotFound', 'WindowEmpty', 'NonMonotoneY', 'TooFewSamples',

    # Nonlinearity
    'GKind', 'GSpec', 'g_eval', 'check_subquadratic', 'default_grid',
    'SubquadraticReport', 'Violation',

    # Problem
    'SolverControls', 'ProblemSpec',

    # Results
    'ShootState', 'Termination', 'TerminationKind', 'ClassKind',
    'Classification', 'CheckResult', 'BStarResult', 'TailFit', 'VProfile',
    'PASS', 'FAIL', 'SKIPPED', 'Trajectory',
]
