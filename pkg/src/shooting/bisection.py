"""Critical slope b_* by bracketing and bisection on the Type I predicate.

For g(x) = beta x^2 with 0 < beta < 1 the Type I slopes form [b_*, +inf),
so the predicate b -> classify(b).is_type_i is monotone and b_* is its
flip point. The Type I end of the final bracket is returned as b_*.
"""

import math
from typing import List, Optional, Tuple

import numpy as np

from src.analysis.bounds import check_upper_bound, seed_root
from src.model import (
    BracketFailure,
    BStarResult,
    CheckResult,
    ClassKind,
    GKind,
    InconsistentPredicate,
    MaxIterations,
    PlateauNotFound,
    ProblemSpec,
    Trajectory,
    UnsupportedNonlinearity,
)
from src.utils import print_debug, print_warning

from .classify import SweepResult, classify_slope, sweep


def check_shootable(problem: ProblemSpec, override: bool = False) -> None:
    """Quadratic g with beta in (0, 1] is required unless override is set.

    beta = 1 is accepted so that the empty-B1 obstruction surfaces as a
    BracketFailure.
    """
    g = problem.g
    if g.kind is GKind.QUADRATIC and 0.0 < g.beta <= 1.0:
        return
    if not override:
        raise UnsupportedNonlinearity(
            f"{g.describe()}: shooting needs g(x) = beta x^2 with 0 < beta < 1 "
            "(use override to run it anyway)"
        )
    print_warning(
        f"{g.describe()}: B1 = [b_*, +inf) is conjectural for this g; "
        "results are experimental"
    )


def bracket(problem: ProblemSpec, override: bool = False) -> Tuple[float, float]:
    """Bracket b_* between a Type II slope and a Type I slope.

    b_lo starts at 0 (always Type II). b_hi starts at max(1, seed) and is
    doubled until it classifies Type I; every Type II probe raises b_lo.

    Raises:
        UnsupportedNonlinearity: g outside the supported family
        BracketFailure: no Type I slope after max_doublings doublings
    """
    check_shootable(problem, override)
    ctl = problem.controls
    seed = seed_root(problem.a, problem.c) if problem.a < 0.0 else 1.0
    b_lo = 0.0
    b_hi = max(1.0, seed)
    probes: List[Tuple[float, str]] = []

    for _ in range(ctl.max_doublings + 1):
        verdict, _ = classify_slope(problem, b_hi)
        probes.append((b_hi, verdict.label))
        print_debug(f"bracket probe b={b_hi:.17g} -> {verdict.label}", level=5)
        if verdict.is_type_i:
            print_debug(f"bracket [{b_lo:.17g}, {b_hi:.17g}]", level=2)
            return b_lo, b_hi
        if verdict.is_type_ii:
            b_lo = b_hi
        b_hi *= 2.0

    hint = ""
    g = problem.g
    if g.kind is GKind.QUADRATIC and g.beta == 1.0 and problem.a <= 0.0:
        hint = " (g(x) = x^2 with a <= 0: B1 is empty)"
    raise BracketFailure(
        f"no Type I slope up to b={probes[-1][0]:.6g} after "
        f"{ctl.max_doublings} doublings; B1 may be empty{hint}",
        probes=probes,
    )


def _tighten(result: SweepResult, b_lo: float, b_hi: float) -> Tuple[float, float]:
    """Consistency sweep: reject II-above-I, then narrow the bracket."""
    if result.inversion is not None:
        b_i, b_ii = result.inversion
        raise InconsistentPredicate(
            f"Type II at b={b_ii:.17g} above Type I at b={b_i:.17g}; "
            "the classification is not monotone in b"
        )
    first_i = result.first_type_i
    if first_i is not None:
        b_hi = first_i
    for row in result.rows:
        if row.b < b_hi and row.verdict.is_type_ii:
            b_lo = max(b_lo, row.b)
    return b_lo, b_hi


def find_bstar(problem: ProblemSpec, override: bool = False,
               initial: Optional[Tuple[float, float]] = None) -> BStarResult:
    """Bisect the bracket down to controls.bisect_tol.

    Args:
        problem: (a, c, g) and controls
        override: allow g outside the supported family
        initial: bracket to start from instead of calling bracket()

    Raises:
        MaxIterations: width still above bisect_tol after max_bisect_iters
        InconsistentPredicate: a Type II above a Type I, or a probe that
            stays Inconclusive after every t_max escalation
    """
    ctl = problem.controls
    if initial is None:
        b_lo, b_hi = bracket(problem, override)
    else:
        check_shootable(problem, override)
        b_lo, b_hi = (float(v) for v in initial)

    if ctl.sweep_points > 0 and b_hi - b_lo > ctl.bisect_tol:
        grid = np.linspace(b_lo, b_hi, ctl.sweep_points + 2)[1:-1]
        b_lo, b_hi = _tighten(sweep(problem, grid), b_lo, b_hi)
        print_debug(f"sweep narrowed bracket to [{b_lo:.17g}, {b_hi:.17g}]", level=2)

    initial_width = b_hi - b_lo
    hi_verdict = None
    iterations = 0
    while b_hi - b_lo > ctl.bisect_tol:
        if iterations >= ctl.max_bisect_iters:
            raise MaxIterations(
                f"bracket width {b_hi - b_lo:.3g} > {ctl.bisect_tol:.3g} "
                f"after {iterations} iterations"
            )
        mid = 0.5 * (b_lo + b_hi)
        if mid <= b_lo or mid >= b_hi:
            break
        verdict, _ = classify_slope(problem, mid)
        iterations += 1
        print_debug(f"bisect #{iterations} b={mid:.17g} -> {verdict.label}", level=5)
        if verdict.kind is ClassKind.TYPE_I:
            b_hi, hi_verdict = mid, verdict
        elif verdict.kind is ClassKind.TYPE_II:
            b_lo = mid
        else:
            raise InconsistentPredicate(
                f"classification stays inconclusive at b={mid:.17g}: {verdict.reason}"
            )

    if hi_verdict is None:
        hi_verdict, hi_traj = classify_slope(problem, b_hi)
    else:
        _, hi_traj = classify_slope(problem, b_hi)
    lo_verdict, _ = classify_slope(problem, b_lo)

    mu = float(hi_traj.f[-1]) if hi_verdict.bounded_hint else None
    b_star = b_hi
    max_iters = 0
    if initial_width > ctl.bisect_tol:
        max_iters = math.ceil(math.log2(initial_width / ctl.bisect_tol))

    diagnostics = [
        CheckResult.of("b_star_positive", b_star > 0.0, value=b_star),
        CheckResult.of(
            "c_plus_ab_negative", problem.c + problem.a * b_star < 0.0,
            f"c + a b_* = {problem.c + problem.a * b_star:.10g}",
            value=problem.c + problem.a * b_star,
        ),
        CheckResult.of(
            "bracket_flip", lo_verdict.is_type_ii and hi_verdict.is_type_i,
            f"b_lo -> {lo_verdict.label}, b_hi -> {hi_verdict.label}",
        ),
        CheckResult.of(
            "iteration_bound", iterations <= max_iters,
            f"{iterations} <= ceil(log2({initial_width:.3g} / {ctl.bisect_tol:.3g})) = {max_iters}",
            value=float(iterations),
        ),
        CheckResult.of(
            "bounded_hint", hi_verdict.bounded_hint,
            "plateau found on the b_hi trajectory" if mu is not None
            else "no plateau on the b_hi trajectory; reduce bisect_tol or raise t_max",
            value=mu,
        ),
    ]
    print_debug(
        f"b_* = {b_star:.17g} after {iterations} iterations, width {b_hi - b_lo:.3g}",
        level=2,
    )
    return BStarResult(b_star, b_lo, b_hi, mu, iterations, diagnostics)


def critical_trajectory(problem: ProblemSpec, result: BStarResult,
                        tol: float = 1e-3) -> Trajectory:
    """Integrate at b_* to t_max and record the plateau in result.mu.

    The bound f <= sqrt(2 b_* + a^2) + tol is appended to result.diagnostics.

    Raises:
        PlateauNotFound: the b_* trajectory is not a decayed Type I run
    """
    verdict, traj = classify_slope(problem, result.b_star)
    if not (verdict.is_type_i and verdict.bounded_hint):
        raise PlateauNotFound(
            f"no plateau at b={result.b_star:.17g} ({verdict.label}, "
            f"f'(end)={traj.fp[-1]:.3g}); the bracket is too wide, use a smaller bisect_tol"
        )
    result.mu = float(traj.f[-1])
    bound = check_upper_bound(traj, result.b_star, tol)
    result.diagnostics = [d for d in result.diagnostics if d.name != bound.name] + [bound]
    traj.notes.append(f"mu={result.mu:.17g}")
    return traj
