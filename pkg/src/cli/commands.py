"""
Subcommand handlers: solve, shoot, sweep, verify, transform.

Handlers take a resolved RunConfig and return an exit code; run() builds
the configuration and maps domain errors to exit codes. Lines meant for
scripts (`type=II`, `b_star=...`) are printed plain as key=value.
"""

from typing import Any, Iterable, Mapping, Optional

import numpy as np

from src import constants
from src.analysis import (
    fit_exponential_tail,
    fit_power_tail,
    m_form_residual,
    map_m_to_beta,
    scale_factor,
    beta_problem,
)
from src.integrator import integrate
from src.model import (
    BracketFailure,
    BVPError,
    check_subquadratic,
    ClassKind,
    GKind,
    InconsistentPredicate,
    InvalidConfig,
    OutOfRange,
    PlateauNotFound,
    StepUnderflow,
    TerminationKind,
    UnsupportedNonlinearity,
    WindowEmpty,
)
from src.shooting import classify, classify_slope, critical_trajectory, find_bstar
from src.shooting import sweep as sweep_slopes
from src.utils import (
    print_error,
    print_header,
    print_info,
    print_pt,
    print_table_row,
    print_warning,
)

from .acceptance import AcceptanceContext, run_criteria, select
from .base import CommandHandler, command
from .config import RunConfig
from .presets import RegressionTable
from .csvio import trajectory_rows, write_sweep_csv, write_trajectory_csv
from .report import Report

DEFAULT_OUT = {
    "solve": "trajectory.csv",
    "shoot": "shoot_report.txt",
    "sweep": "sweep.csv",
    "transform": "transform_report.txt",
}


def print_kv(key: str, value: Any) -> None:
    """Plain key=value line; floats use the shortest round-trip form."""
    if isinstance(value, (float, np.floating)):
        value = repr(float(value))
    elif isinstance(value, bool):
        value = "true" if value else "false"
    print_pt(f"{key}={value}")


class BVPCommands(CommandHandler):
    """Subcommands of main.py."""

    def run(self, cmd: str, preset: Optional[str] = None, config_path: Optional[str] = None,
            flags: Optional[Mapping[str, Any]] = None,
            environ: Optional[Mapping[str, str]] = None, **options) -> int:
        """Resolve the configuration, dispatch cmd and map errors to exit codes."""
        try:
            cfg = RunConfig.layered(preset, config_path, environ, flags)
            code = self.dispatch(cmd, cfg, **options)
            if code is None:
                print_error(f"Unknown command: {cmd}")
                return constants.EXIT_INVALID
            return code
        except (InvalidConfig, OutOfRange, UnsupportedNonlinearity) as e:
            print_error(str(e))
            return constants.EXIT_INVALID
        except StepUnderflow as e:
            print_error(f"step size underflow: {e}")
            return constants.EXIT_UNDERFLOW
        except BracketFailure as e:
            print_error(str(e))
            return constants.EXIT_BRACKET
        except InconsistentPredicate as e:
            print_error(str(e))
            return constants.EXIT_INCONSISTENT
        except BVPError as e:
            print_error(f"{type(e).__name__}: {e}")
            return constants.EXIT_FAILED

    @staticmethod
    def _out(cfg: RunConfig, cmd: str) -> str:
        return cfg.get("out") or DEFAULT_OUT[cmd]

    @command("solve", help_text="Integrate one trajectory and write it as CSV",
             usage="solve --c C --b B [--a A] [--beta BETA] [--dt DT] [--out PATH]",
             category="run")
    def solve(self, cfg: RunConfig, **_) -> int:
        problem = cfg.problem()
        b = cfg.require("b")
        out = self._out(cfg, "solve")

        traj = integrate(problem, b)
        if traj.termination.kind is TerminationKind.STEP_UNDERFLOW:
            raise StepUnderflow(f"b={b!r} stopped at t={traj.t_final:.17g}")
        verdict = classify(traj)
        if verdict.kind is ClassKind.INCONCLUSIVE:
            # classify_slope escalates t_max; the CSV keeps the requested horizon
            verdict, _ = classify_slope(problem, b)

        rows = trajectory_rows(traj, cfg.require("dt"))
        write_trajectory_csv(out, rows)

        print_kv("type", verdict.label)
        print_kv("termination", str(traj.termination))
        if verdict.t0 is not None:
            print_kv("t0", verdict.t0)
        if verdict.is_type_i:
            print_kv("bounded_hint", verdict.bounded_hint)
        print_info(f"Wrote {len(rows)} rows to {out}")
        return constants.EXIT_OK

    @command("shoot", help_text="Locate the critical slope b_* and report it",
             usage="shoot --c C [--a A] [--beta BETA] [--bisect-tol TOL] [--override]",
             category="run")
    def shoot(self, cfg: RunConfig, **_) -> int:
        problem = cfg.problem()
        out = self._out(cfg, "shoot")
        if problem.g.kind is not GKind.QUADRATIC:
            sub = check_subquadratic(problem.g)
            if not sub.ok:
                print_warning(
                    f"{problem.g.describe()} is not subquadratic on the sample grid "
                    f"({len(sub.violations)} violations: {', '.join(sorted(sub.kinds()))})"
                )
        result = find_bstar(problem, override=bool(cfg.get("override")))
        reference = RegressionTable().lookup(problem)
        if reference is not None:
            result.diagnostics.append(reference.check(result.b_star))

        report = Report("shoot")
        report.add("a", problem.a).add("c", problem.c).add("g", problem.g.describe())
        report.add("b_star", result.b_star).add("b_lo", result.b_lo).add("b_hi", result.b_hi)
        report.add("width", result.width).add("iterations", result.iterations)

        try:
            traj = critical_trajectory(problem, result)
            fit = fit_exponential_tail(traj)
            report.add("tail.exp.mu_hat", fit.mu_hat).add("tail.exp.A_hat", fit.A_hat)
            report.add("tail.exp.rate_hat", fit.rate_hat)
            report.add("tail.exp.window", f"{fit.t_start!r},{fit.t_end!r}")
        except (PlateauNotFound, WindowEmpty) as e:
            print_warning(str(e))
            report.add("tail.exp", f"unavailable: {e}")

        if problem.g.beta is not None:
            try:
                fit = fit_power_tail(integrate(problem, result.b_star + 1.0), problem.g.beta)
                report.add("tail.power.rate_hat", fit.rate_hat)
                report.add("tail.power.target", fit.target)
                report.add("tail.power.A_hat", fit.A_hat)
            except WindowEmpty as e:
                report.add("tail.power", f"unavailable: {e}")

        report.add("mu", result.mu)
        for check in result.diagnostics:
            report.add_check(check)
        json_path = report.write(out)

        print_kv("b_star", result.b_star)
        print_kv("b_lo", result.b_lo)
        print_kv("b_hi", result.b_hi)
        print_kv("iterations", result.iterations)
        if result.mu is not None:
            print_kv("mu", result.mu)
        failed = [c.name for c in result.diagnostics if c.status == "fail"]
        if failed:
            print_warning(f"diagnostics failed: {', '.join(failed)}")
        print_info(f"Wrote {out} and {json_path}")
        return constants.EXIT_OK

    @command("sweep", help_text="Classify a grid of slopes and check monotonicity",
             usage="sweep --c C --b-min B0 --b-max B1 [--n N] [--workers W]",
             category="run")
    def sweep(self, cfg: RunConfig, **_) -> int:
        problem = cfg.problem()
        n = cfg.require("n")
        b_min, b_max = cfg.require("b_min"), cfg.require("b_max")
        if n < 1:
            raise InvalidConfig("n", "the b grid is empty")
        if b_max < b_min:
            raise InvalidConfig("b_max", f"must be >= b_min ({b_min!r}), got {b_max!r}")
        if n > 1 and b_max == b_min:
            raise InvalidConfig("b_max", "must exceed b_min for a grid of several points")
        out = self._out(cfg, "sweep")

        result = sweep_slopes(problem, np.linspace(b_min, b_max, n), workers=cfg.get("workers"))
        write_sweep_csv(out, result)

        inv = result.inversion
        print_kv("rows", len(result.rows))
        print_kv("monotone", inv is None)
        if result.first_type_i is not None:
            print_kv("first_type_i", result.first_type_i)
        if result.last_type_ii is not None:
            print_kv("last_type_ii", result.last_type_ii)
        print_info(f"Wrote {out}")
        if inv is not None:
            print_error(f"Type II at b={inv[1]!r} above Type I at b={inv[0]!r}")
            return constants.EXIT_FAILED
        return constants.EXIT_OK

    @command("verify", help_text="Run the acceptance suite",
             usage="verify [--list] [--only NAME[,NAME]]", category="check")
    def verify(self, cfg: RunConfig, only: Optional[Iterable[str]] = None,
               list_only: bool = False, **_) -> int:
        criteria = select(only)
        if list_only:
            print_table_row(["#", "name", "description"], [3, 18, 50], header=True)
            for crit in criteria:
                print_table_row([crit.number, crit.name, crit.title], [3, 18, 50])
            return constants.EXIT_OK

        print_header(f"Acceptance suite ({len(criteria)} criteria)")
        ctx = AcceptanceContext(controls=cfg.controls(), workers=cfg.get("workers"))
        outcomes = run_criteria(ctx, criteria)

        report = Report("verify")
        print_table_row(["#", "name", "result", "time", "detail"], [3, 18, 6, 8, 40], header=True)
        for o in outcomes:
            failing = [c for c in o.checks if c.status == "fail"]
            detail = o.error or (f"{failing[0].name}: {failing[0].detail}" if failing else "")
            status = "PASS" if o.passed else "FAIL"
            print_table_row([o.criterion.number, o.criterion.name, status,
                             f"{o.elapsed:.1f}s", detail], [3, 18, 6, 8, 40])
            report.add(f"criterion.{o.criterion.name}", status.lower())
            for check in o.checks:
                report.add_check(check, prefix=f"{o.criterion.name}")

        passed = sum(o.passed for o in outcomes)
        print_kv("passed", f"{passed}/{len(outcomes)}")
        if cfg.get("out"):
            report.write(cfg.get("out"))
        return constants.EXIT_OK if passed == len(outcomes) else constants.EXIT_FAILED

    @command("transform", help_text="Solve the m-equation through its beta form",
             usage="transform --m M [--a A]", category="run")
    def transform(self, cfg: RunConfig, **_) -> int:
        m = cfg.require("m")
        beta = map_m_to_beta(m)
        a = cfg.require("a")
        out = self._out(cfg, "transform")
        k = scale_factor(m)

        problem = beta_problem(m, a, cfg.controls())
        result = find_bstar(problem)
        traj = integrate(problem, result.b_star)
        residual = m_form_residual(traj, m)
        mu = float(traj.f[-1]) if classify(traj).bounded_hint else None

        report = Report("transform")
        report.add("m", m).add("beta", beta).add("k", k).add("a", a)
        report.add("beta.a", problem.a).add("beta.c", problem.c)
        report.add("beta.b_star", result.b_star).add("m.b_star", result.b_star)
        report.add("beta.mu", mu).add("m.mu", None if mu is None else mu / k)
        report.add("m.residual", residual)
        for check in result.diagnostics:
            report.add_check(check)
        report.write(out)

        print_kv("beta", beta)
        print_kv("b_star", result.b_star)
        print_kv("residual", residual)
        print_info(f"Wrote {out}")
        return constants.EXIT_OK
