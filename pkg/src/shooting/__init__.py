"""Trajectory classification and the critical slope search.

- classify.py: Type I / Type II verdicts, blow-up confirmation, b sweeps
- bisection.py: bracket, find_bstar, critical_trajectory
"""

from .classify import (
    classify, classify_slope, blowup_followthrough, FollowThroughReport,
    sweep, SweepResult, SweepRow,
)
from .bisection import bracket, find_bstar, critical_trajectory, check_shootable

__all__ = [
    'classify', 'classify_slope', 'blowup_followthrough', 'FollowThroughReport',
    'sweep', 'SweepResult', 'SweepRow',
    'bracket', 'find_bstar', 'critical_trajectory', 'check_shootable',
]
