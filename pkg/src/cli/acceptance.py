"""
Acceptance suite run by `main.py verify`.

Each criterion is a function registered with @criterion that returns a list
of CheckResult; it passes when every check passes. Criteria share an
AcceptanceContext that caches the b_* searches of the standard matrix

    beta in {0.25, 0.5, 0.75} x a in {-1, 0, 1} x c in {-1, -0.1}
"""

import itertools
import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from src.analysis import (
    beta_problem,
    check_upper_bound,
    first_integral_residual,
    fit_exponential_tail,
    fit_power_tail,
    identity_residuals,
    m_form_residual,
    map_m_to_beta,
    v_ode_residual,
    v_transform,
)
from src.integrator import integrate, oracle_bstar
from src.model import (
    BracketFailure,
    BStarResult,
    BVPError,
    CheckResult,
    ClassKind,
    GSpec,
    InvalidConfig,
    ProblemSpec,
    SolverControls,
    TerminationKind,
    Trajectory,
)
from src.shooting import (
    blowup_followthrough,
    bracket,
    classify_slope,
    critical_trajectory,
    find_bstar,
    sweep,
)
from src.utils import print_debug

MATRIX_BETAS = (0.25, 0.5, 0.75)
MATRIX_AS = (-1.0, 0.0, 1.0)
MATRIX_CS = (-1.0, -0.1)
# b_* precision for matrix entries that only need a representative slope
MATRIX_BISECT_TOL = 1e-8
# Independent fixed-step scan of [0, bracket b_hi] behind criterion 4
ORACLE_SCAN_POINTS = 10_000


def matrix_entries() -> Iterable[Tuple[float, float, float]]:
    return itertools.product(MATRIX_BETAS, MATRIX_AS, MATRIX_CS)


@dataclass
class AcceptanceContext:
    """Controls shared by all criteria plus cached b_* searches."""

    controls: SolverControls = field(default_factory=SolverControls)
    workers: int = 1
    _bstar: Dict[tuple, BStarResult] = field(default_factory=dict)
    _critical: Optional[Tuple[ProblemSpec, BStarResult, Trajectory]] = None

    def problem(self, beta: float, a: float, c: float, **overrides) -> ProblemSpec:
        return ProblemSpec(a, c, GSpec.quadratic(beta), replace(self.controls, **overrides))

    def coarse_bstar(self, key: tuple, problem: ProblemSpec) -> BStarResult:
        """b_* at MATRIX_BISECT_TOL without the consistency sweep, cached by key."""
        if key not in self._bstar:
            controls = replace(problem.controls, sweep_points=0,
                               bisect_tol=max(problem.controls.bisect_tol, MATRIX_BISECT_TOL))
            self._bstar[key] = find_bstar(problem.with_controls(controls))
            print_debug(f"b_* {key} = {self._bstar[key].b_star:.12g}", level=2)
        return self._bstar[key]

    def matrix_bstar(self, beta: float, a: float, c: float) -> BStarResult:
        return self.coarse_bstar((beta, a, c), self.problem(beta, a, c))

    def critical(self) -> Tuple[ProblemSpec, BStarResult, Trajectory]:
        """Full-precision b_* and critical trajectory for beta = 0.5, a = 0, c = -1."""
        if self._critical is None:
            problem = self.problem(0.5, 0.0, -1.0)
            result = find_bstar(problem)
            traj = critical_trajectory(problem, result)
            self._critical = (problem, result, traj)
        return self._critical


@dataclass
class Criterion:
    number: int
    name: str
    title: str
    run: Callable[[AcceptanceContext], List[CheckResult]]


@dataclass
class Outcome:
    criterion: Criterion
    checks: List[CheckResult]
    elapsed: float
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.status != "fail" for c in self.checks)


CRITERIA: Dict[str, Criterion] = {}


def criterion(number: int, name: str, title: str):
    """Register an acceptance criterion under name."""
    def decorator(func):
        CRITERIA[name] = Criterion(number, name, title, func)
        return func
    return decorator


def list_criteria() -> List[Criterion]:
    return sorted(CRITERIA.values(), key=lambda c: c.number)


def select(only: Optional[Iterable[str]] = None) -> List[Criterion]:
    """Criteria named in only (all when None); unknown names raise InvalidConfig."""
    if not only:
        return list_criteria()
    names = [n.strip() for n in only if n.strip()]
    unknown = [n for n in names if n not in CRITERIA]
    if unknown:
        raise InvalidConfig("only", f"unknown criteria: {', '.join(unknown)}")
    return sorted((CRITERIA[n] for n in names), key=lambda c: c.number)


def run_criteria(ctx: AcceptanceContext, criteria: List[Criterion]) -> List[Outcome]:
    outcomes = []
    for crit in criteria:
        start = time.perf_counter()
        try:
            checks = crit.run(ctx)
            error = None
        except (BVPError, ValueError, ArithmeticError) as e:
            checks, error = [], f"{type(e).__name__}: {e}"
        outcomes.append(Outcome(crit, checks, time.perf_counter() - start, error))
    return outcomes


# --- Criteria ---------------------------------------------------------------

@criterion(1, "oracle", "Closed-form solution sqrt(1 - t) on [0, 0.9]")
def _oracle(ctx: AcceptanceContext) -> List[CheckResult]:
    problem = ProblemSpec(1.0, -0.25, GSpec.oracle_cubic(), ctx.controls.with_t_max(0.9))
    traj = integrate(problem, -0.5)
    ts = np.linspace(0.0, 0.9, 181)
    Y = traj.evaluate(ts)
    err = max(
        np.max(np.abs(Y[:, 0] - np.sqrt(1.0 - ts))),
        np.max(np.abs(Y[:, 1] + 0.5 / np.sqrt(1.0 - ts))),
    )
    return [
        CheckResult.of("reached_tmax", traj.termination.kind is TerminationKind.REACHED_TMAX,
                       str(traj.termination)),
        CheckResult.of("max_error", err <= 1e-7, f"max error {err:.3g}", value=float(err)),
    ]


@criterion(2, "first-integral", "g(x) = x^2 first integral along the trajectory")
def _first_integral(ctx: AcceptanceContext) -> List[CheckResult]:
    checks = []
    for a, b, c in ((-1.0, 2.0, -1.0), (0.0, 1.0, -0.5), (1.0, 0.5, -1.0)):
        traj = integrate(ctx.problem(1.0, a, c), b)
        r = first_integral_residual(traj)
        checks.append(CheckResult.of(f"a={a:g},b={b:g},c={c:g}", r <= 1e-8,
                                     f"drift {r:.3g}", value=r))
    return checks


@criterion(3, "identities", "Integral identities on the 54-entry matrix")
def _identities(ctx: AcceptanceContext) -> List[CheckResult]:
    checks = []
    for beta, a, c in matrix_entries():
        b_star = ctx.matrix_bstar(beta, a, c).b_star
        problem = ctx.problem(beta, a, c)
        for b in (0.5, b_star, b_star + 1.0):
            traj = integrate(problem, b)
            worst = max(identity_residuals(traj, which) for which in (1, 2, 3))
            checks.append(CheckResult.of(
                f"beta={beta:g},a={a:g},c={c:g},b={b:.6g}", worst <= 1e-6,
                f"max scaled residual {worst:.3g}", value=worst,
            ))
    return checks


@criterion(4, "critical-slope", "b_* for beta = 0.5, a = 0, c = -1 against the RK4 oracle")
def _critical_slope(ctx: AcceptanceContext) -> List[CheckResult]:
    problem, result, _ = ctx.critical()
    _, b_hi = bracket(problem)
    lo, hi = oracle_bstar(problem, 0.0, b_hi, n_scan=ORACLE_SCAN_POINTS)
    oracle = 0.5 * (lo + hi)
    flip = next(d for d in result.diagnostics if d.name == "bracket_flip")
    return [
        CheckResult.of("width", result.width <= 1e-10, f"{result.width:.3g}", value=result.width),
        CheckResult.of("iterations", result.iterations <= 60, value=float(result.iterations)),
        CheckResult.of("oracle_agreement", abs(result.b_star - oracle) <= 1e-6,
                       f"b_*={result.b_star:.12g} oracle={oracle:.12g}",
                       value=abs(result.b_star - oracle)),
        flip,
    ]


@criterion(5, "sign", "c + a b_* < 0 across the matrix")
def _sign(ctx: AcceptanceContext) -> List[CheckResult]:
    checks = []
    for beta, a, c in matrix_entries():
        b_star = ctx.matrix_bstar(beta, a, c).b_star
        ok = c + a * b_star < 0.0 and (a <= 0.0 or b_star < -c / a)
        checks.append(CheckResult.of(f"beta={beta:g},a={a:g},c={c:g}", ok,
                                     f"c + a b_* = {c + a * b_star:.6g}", value=c + a * b_star))
    return checks


@criterion(6, "monotone", "64-point sweeps: no Inconclusive, no Type II above a Type I")
def _monotone(ctx: AcceptanceContext) -> List[CheckResult]:
    checks = []
    for beta, a, c in matrix_entries():
        b_star = ctx.matrix_bstar(beta, a, c).b_star
        result = sweep(ctx.problem(beta, a, c), np.linspace(-2.0, 2.0 * b_star, 64), ctx.workers)
        inv = result.inversion
        undecided = [row.b for row in result.rows if row.verdict.kind is ClassKind.INCONCLUSIVE]
        if inv is not None:
            detail = f"Type I at {inv[0]:.6g}, Type II at {inv[1]:.6g}"
        elif undecided:
            detail = f"inconclusive at b={undecided[0]:.6g} ({len(undecided)} rows)"
        else:
            detail = "monotone"
        checks.append(CheckResult.of(f"beta={beta:g},a={a:g},c={c:g}", result.monotone, detail))
    return checks


@criterion(7, "b1-empty", "g(x) = x^2, a = -1, c = -1 admits no Type I slope")
def _b1_empty(ctx: AcceptanceContext) -> List[CheckResult]:
    try:
        b_lo, b_hi = bracket(ctx.problem(1.0, -1.0, -1.0))
    except BracketFailure as e:
        top = max(b for b, _ in e.probes)
        all_ii = all(label == "II" for _, label in e.probes)
        return [
            CheckResult.of("bracket_failure", True, str(e)),
            CheckResult.of("reach", top >= 1e4, f"largest probe b={top:.3g}", value=top),
            CheckResult.of("all_type_ii", all_ii, f"{len(e.probes)} probes"),
        ]
    return [CheckResult.of("bracket_failure", False, f"bracket found [{b_lo:g}, {b_hi:g}]")]


@criterion(8, "exponential-tail", "f'' ~ -mu f' and f <= sqrt(2 b_* + a^2) at b_*")
def _exponential_tail(ctx: AcceptanceContext) -> List[CheckResult]:
    _, result, traj = ctx.critical()
    fit = fit_exponential_tail(traj)
    rel = abs(fit.rate_hat - fit.mu_hat) / fit.mu_hat
    return [
        CheckResult.of("rate_vs_mu", rel <= 0.05,
                       f"rate={fit.rate_hat:.6g} mu={fit.mu_hat:.6g}", value=rel),
        check_upper_bound(traj, result.b_star, 1e-3),
    ]


@criterion(9, "power-tail", "log-log slope 1/(1 + beta) at b_* + 1, t_max = 2000")
def _power_tail(ctx: AcceptanceContext) -> List[CheckResult]:
    checks = []
    for beta in MATRIX_BETAS:
        b_star = ctx.matrix_bstar(beta, 0.0, -1.0).b_star
        traj = integrate(ctx.problem(beta, 0.0, -1.0, t_max=2000.0), b_star + 1.0)
        fit = fit_power_tail(traj, beta)
        err = abs(fit.rate_hat - fit.target)
        checks.append(CheckResult.of(f"beta={beta:g}", err <= 0.03,
                                     f"slope={fit.rate_hat:.6g} target={fit.target:.6g}",
                                     value=err))
    return checks


@criterion(10, "v-transform", "v-chart of the critical trajectory")
def _v_transform(ctx: AcceptanceContext) -> List[CheckResult]:
    problem, result, traj = ctx.critical()
    profile = v_transform(traj, max_dt=0.005)
    b, a, c = traj.b, problem.a, problem.c
    v1 = a / math.sqrt(b)
    vp1 = b ** 1.5 / (2.0 * c)
    residual = v_ode_residual(profile, problem.g.beta)
    return [
        CheckResult.of("v(1)", abs(profile.v[0] - v1) <= 1e-8, value=float(profile.v[0])),
        CheckResult.of("v'(1)", abs(profile.vp[0] - vp1) <= 1e-8, value=float(profile.vp[0])),
        CheckResult.of("v'_negative", bool(np.all(profile.vp < 0.0)),
                       value=float(np.max(profile.vp))),
        CheckResult.of("v_equation", residual <= 1e-3, f"residual {residual:.3g}", value=residual),
    ]


@criterion(11, "m-correspondence", "m-equation residual of the transformed solutions")
def _m_correspondence(ctx: AcceptanceContext) -> List[CheckResult]:
    checks = [CheckResult.of("map(-0.75)", map_m_to_beta(-0.75) == 0.4,
                             value=map_m_to_beta(-0.75))]
    for m, a in itertools.product((-0.75, -0.9), (0.0, 1.0)):
        problem = beta_problem(m, a, ctx.controls)
        b_star = ctx.coarse_bstar(("m", m, a), problem).b_star
        traj = integrate(problem, b_star)
        r = m_form_residual(traj, m)
        checks.append(CheckResult.of(f"m={m:g},a={a:g}", r <= 1e-7, f"residual {r:.3g}", value=r))
    return checks


@criterion(12, "blow-up", "Type II trajectories of the matrix blow up")
def _blow_up(ctx: AcceptanceContext) -> List[CheckResult]:
    checks = []
    for beta, a, c in matrix_entries():
        b_star = ctx.matrix_bstar(beta, a, c).b_star
        problem = ctx.problem(beta, a, c)
        for b in sorted({0.5, 0.5 * b_star}):
            verdict, traj = classify_slope(problem, b)
            if not verdict.is_type_ii:
                continue
            report = blowup_followthrough(traj, escalations=1)
            checks.append(CheckResult.of(
                f"beta={beta:g},a={a:g},c={c:g},b={b:.6g}", report.confirmed,
                report.detail, value=report.tb_est,
            ))
    return checks
