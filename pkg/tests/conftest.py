"""Shared fixtures for the hfbvp test suite."""

import pytest

from src import constants
from src.model import GSpec, ProblemSpec, SolverControls
from src.shooting import critical_trajectory, find_bstar


@pytest.fixture(autouse=True)
def quiet_debug():
    """Keep debug output off regardless of test order."""
    saved = constants.DEBUG_LEVEL
    constants.DEBUG_LEVEL = 0
    yield
    constants.DEBUG_LEVEL = saved


@pytest.fixture
def quadratic_problem():
    """Factory for g(x) = beta x^2 problems; extra kwargs go to SolverControls."""
    def make(beta=0.5, a=0.0, c=-1.0, **controls):
        return ProblemSpec(a=a, c=c, g=GSpec.quadratic(beta), controls=SolverControls(**controls))
    return make


@pytest.fixture
def oracle_problem():
    """g(x) = x^2 (1 - 12 x^3), a = 1, c = -1/4; b = -1/2 gives f = sqrt(1 - t)."""
    return ProblemSpec(a=1.0, c=-0.25, g=GSpec.oracle_cubic(),
                       controls=SolverControls(t_max=0.9))


@pytest.fixture(scope="session")
def critical_run():
    """Full-precision b_* and critical trajectory for beta = 0.5, a = 0, c = -1."""
    problem = ProblemSpec(a=0.0, c=-1.0, g=GSpec.quadratic(0.5))
    result = find_bstar(problem)
    traj = critical_trajectory(problem, result)
    return problem, result, traj
