"""Type I / Type II classification of shooting trajectories.

Type I:  f' >= 0 on the whole maximal interval [0, T_b)
Type II: f' < 0 on (t0, T_b) for some t0, and then T_b < +inf

A Type II verdict is reached as soon as f' crosses zero; the blow-up that
must follow is confirmed separately by blowup_followthrough().
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src import constants
from src.integrator import integrate
from src.model import (
    Classification,
    ClassKind,
    ProblemSpec,
    TerminationKind,
    Trajectory,
)
from src.utils import print_debug


def _plateaued(traj: Trajectory) -> bool:
    """Relative change of f over the last decade of time below PLATEAU_RTOL."""
    t_end = traj.t_final
    if t_end <= 0.0:
        return False
    f_end = float(traj.f[-1])
    f_decade = traj.state_at(t_end / 10.0).f
    scale = max(abs(f_end), np.finfo(float).tiny)
    return abs(f_end - f_decade) / scale < constants.PLATEAU_RTOL


def _first_nonpositive_time(traj: Trajectory) -> float:
    idx = np.nonzero(traj.fp <= 0.0)[0]
    return float(traj.t[idx[0]]) if len(idx) else 0.0


def classify(traj: Trajectory) -> Classification:
    """Classify a trajectory produced by integrate().

    Inconclusive is returned (not raised) for truncated runs, runs that
    reach t_max after f' turned negative, and upward blow-up.
    """
    term = traj.termination
    zero_eps = traj.problem.controls.zero_eps

    if term.kind is TerminationKind.ZERO_CROSSING:
        return Classification.type_ii(t0=term.t)

    if term.kind is TerminationKind.BLOW_UP:
        if traj.fp[-1] < 0.0:
            t0 = traj.zero_crossing
            if t0 is None:
                t0 = _first_nonpositive_time(traj)
            return Classification.type_ii(t0=t0, tb_est=term.t)
        return Classification.inconclusive(f"blow-up with f' >= 0 at t={term.t:.6g}")

    if term.kind is TerminationKind.REACHED_TMAX:
        if traj.zero_crossing is not None or np.any(traj.fp <= 0.0):
            return Classification.inconclusive(
                f"f' turned negative but no blow-up before t_max={term.t:.6g}"
            )
        bounded = bool(traj.fp[-1] < zero_eps and _plateaued(traj))
        return Classification.type_i(bounded_hint=bounded)

    return Classification.inconclusive(f"integration truncated: {term}")


def classify_slope(problem: ProblemSpec, b: float,
                   through_crossing: bool = False) -> Tuple[Classification, Trajectory]:
    """Integrate and classify, doubling t_max on Inconclusive.

    At most controls.max_retries retries are made before the Inconclusive
    verdict is returned.
    """
    current = problem
    for attempt in range(problem.controls.max_retries + 1):
        traj = integrate(current, b, through_crossing=through_crossing)
        verdict = classify(traj)
        if verdict.kind is not ClassKind.INCONCLUSIVE:
            break
        if attempt < problem.controls.max_retries:
            t_max = current.controls.t_max * 2.0
            print_debug(f"b={b:.17g}: {verdict.reason}; retrying with t_max={t_max:g}", level=3)
            current = current.with_controls(current.controls.with_t_max(t_max))
    print_debug(f"classify b={b:.17g} -> {verdict.label}", level=5)
    return verdict, traj


@dataclass
class FollowThroughReport:
    """Outcome of the Type II blow-up confirmation."""

    confirmed: bool
    detail: str
    tb_est: Optional[float] = None
    t_max_used: Optional[float] = None
    needs_rerun: bool = False  # still finite at t_max, rerun with larger t_max
    precondition_ok: bool = True


def blowup_followthrough(traj: Trajectory, escalations: int = 1) -> FollowThroughReport:
    """Confirm that a Type II trajectory blows up in finite time.

    A trajectory stopped at its f' zero crossing is continued past it;
    reaching t_max triggers up to `escalations` reruns with t_max doubled.
    """
    verdict = classify(traj)
    if not verdict.is_type_ii:
        return FollowThroughReport(
            confirmed=False,
            detail=f"precondition violated: trajectory is {verdict.label}, not II",
            precondition_ok=False,
        )
    if traj.termination.kind is TerminationKind.BLOW_UP:
        return FollowThroughReport(True, "blow-up recorded", traj.termination.t,
                                   traj.problem.controls.t_max)

    problem = traj.problem
    for attempt in range(escalations + 1):
        run = integrate(problem, traj.b, through_crossing=True)
        if run.termination.kind is TerminationKind.BLOW_UP:
            return FollowThroughReport(True, "blow-up after f' zero crossing",
                                       run.termination.t, problem.controls.t_max)
        if run.termination.kind is not TerminationKind.REACHED_TMAX:
            return FollowThroughReport(False, f"continuation stopped: {run.termination}",
                                       t_max_used=problem.controls.t_max)
        if attempt < escalations:
            problem = problem.with_controls(
                problem.controls.with_t_max(problem.controls.t_max * 2.0))
    return FollowThroughReport(
        confirmed=False,
        detail="still finite at t_max; rerun with a larger t_max",
        t_max_used=problem.controls.t_max,
        needs_rerun=True,
    )


@dataclass
class SweepRow:
    b: float
    verdict: Classification


@dataclass
class SweepResult:
    """Classification of a b-grid, in ascending b."""

    rows: List[SweepRow] = field(default_factory=list)

    @property
    def monotone(self) -> bool:
        """No Type II above any Type I, no Inconclusive."""
        seen_type_i = False
        for row in self.rows:
            if row.verdict.kind is ClassKind.INCONCLUSIVE:
                return False
            if row.verdict.is_type_i:
                seen_type_i = True
            elif seen_type_i:
                return False
        return True

    @property
    def inversion(self) -> Optional[Tuple[float, float]]:
        """First (b_type_i, b_type_ii) pair with the Type II slope above, if any."""
        first_i = None
        for row in self.rows:
            if row.verdict.is_type_i and first_i is None:
                first_i = row.b
            elif row.verdict.is_type_ii and first_i is not None:
                return first_i, row.b
        return None

    @property
    def first_type_i(self) -> Optional[float]:
        for row in self.rows:
            if row.verdict.is_type_i:
                return row.b
        return None

    @property
    def last_type_ii(self) -> Optional[float]:
        found = None
        for row in self.rows:
            if row.verdict.is_type_ii:
                found = row.b
        return found


def _classify_only(args):
    problem, b = args
    return classify_slope(problem, b)[0]


def sweep(problem: ProblemSpec, grid: Sequence[float], workers: int = 1) -> SweepResult:
    """Classify every b of grid; rows are returned in ascending b."""
    bs = sorted(float(b) for b in grid)
    jobs = [(problem, b) for b in bs]
    if workers > 1 and len(bs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(_classify_only, jobs))
    else:
        verdicts = [_classify_only(job) for job in jobs]
    return SweepResult([SweepRow(b, v) for b, v in zip(bs, verdicts)])
