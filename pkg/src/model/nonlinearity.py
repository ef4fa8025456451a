"""The nonlinearity g of f''' + f f'' + g(f') = 0.

Three variants are supported:
- Quadratic: g(x) = beta * x^2, the porous-medium free convection family
- OracleCubic: g(x) = x^2 (1 - 12 x^3), which admits the closed-form
  solution f(t) = sqrt(1 - t) for (a, b, c) = (1, -1/2, -1/4)
- Polynomial: g(x) = sum_k coeffs[k] x^k with coeffs[0] == 0

Polynomials are locally Lipschitz, so restricting user input to them keeps
the well-posedness hypothesis automatic.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from src import constants
from .errors import InvalidConfig


class GKind(Enum):
    """Variant tag for GSpec."""

    QUADRATIC = "quadratic"
    ORACLE_CUBIC = "oracle-cubic"
    POLYNOMIAL = "polynomial"


@dataclass(frozen=True)
class GSpec:
    """Immutable description of the nonlinearity g."""

    kind: GKind
    beta: Optional[float] = None  # Quadratic only
    coeffs: Tuple[float, ...] = ()  # Polynomial only, ascending powers
    delta_margin: Optional[float] = None  # checks g <= (1 - delta) x^2

    def __post_init__(self):
        if self.kind is GKind.QUADRATIC:
            if self.beta is None or not math.isfinite(self.beta) or self.beta <= 0:
                raise InvalidConfig("beta", f"must be a positive number, got {self.beta}")
        if self.kind is GKind.POLYNOMIAL:
            if not self.coeffs:
                raise InvalidConfig("coeffs", "polynomial needs at least one coefficient")
            if self.coeffs[0] != 0:
                raise InvalidConfig("coeffs", "constant term must be 0 so that g(0) = 0")
        if self.delta_margin is not None and not (0 < self.delta_margin < 1):
            raise InvalidConfig("delta_margin", f"must lie in (0, 1), got {self.delta_margin}")

    @classmethod
    def quadratic(cls, beta: float, delta_margin: Optional[float] = None) -> 'GSpec':
        return cls(GKind.QUADRATIC, beta=float(beta), delta_margin=delta_margin)

    @classmethod
    def oracle_cubic(cls) -> 'GSpec':
        return cls(GKind.ORACLE_CUBIC)

    @classmethod
    def polynomial(cls, coeffs: Sequence[float],
                   delta_margin: Optional[float] = None) -> 'GSpec':
        return cls(GKind.POLYNOMIAL, coeffs=tuple(float(c) for c in coeffs),
                   delta_margin=delta_margin)

    def scalar_fn(self) -> Callable[[float], float]:
        """Return a plain-float evaluator for the integrator's inner loop."""
        if self.kind is GKind.QUADRATIC:
            beta = self.beta
            return lambda x: beta * (x * x)
        if self.kind is GKind.ORACLE_CUBIC:
            return lambda x: (x * x) * (1.0 - 12.0 * x * x * x)
        coeffs = self.coeffs[::-1]

        def horner(x):
            acc = 0.0
            for c in coeffs:
                acc = acc * x + c
            return acc
        return horner

    def describe(self) -> str:
        """Short human-readable form, e.g. 'quadratic(beta=0.5)'."""
        if self.kind is GKind.QUADRATIC:
            return f"quadratic(beta={self.beta:g})"
        if self.kind is GKind.ORACLE_CUBIC:
            return "oracle-cubic"
        return f"polynomial({','.join(f'{c:g}' for c in self.coeffs)})"


def g_eval(g: GSpec, x):
    """Evaluate g at a float or a numpy array of floats."""
    if g.kind is GKind.QUADRATIC:
        return g.beta * (x * x)
    if g.kind is GKind.ORACLE_CUBIC:
        return (x * x) * (1.0 - 12.0 * x * x * x)
    return P.polyval(x, g.coeffs)


@dataclass
class Violation:
    """A grid point where the subquadratic bounds fail."""

    x: float
    kind: str  # 'positivity', 'quadratic' or 'delta'
    value: float  # g(x)


@dataclass
class SubquadraticReport:
    """Outcome of a sampled subquadraticity check."""

    points_checked: int
    delta_margin: Optional[float] = None
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set:
        return {v.kind for v in self.violations}


def default_grid() -> np.ndarray:
    """512 log-spaced points in [1e-6, 1e3], half of them negative."""
    lo, hi = constants.SUBQUADRATIC_GRID_DECADES
    mags = np.logspace(lo, hi, constants.SUBQUADRATIC_GRID_POINTS // 2)
    return np.concatenate([-mags[::-1], mags])


def check_subquadratic(g: GSpec, grid: Optional[Sequence[float]] = None) -> SubquadraticReport:
    """Report grid points violating 0 < g(x) <= x^2 (and <= (1-delta) x^2).

    Only a sampled check: global verification for arbitrary polynomials is
    not attempted. Points equal to zero are skipped.
    """
    xs = default_grid() if grid is None else np.asarray(list(grid), dtype=float)
    xs = xs[xs != 0.0]
    report = SubquadraticReport(points_checked=len(xs), delta_margin=g.delta_margin)
    if len(xs) == 0:
        return report

    values = np.asarray(g_eval(g, xs), dtype=float)
    squares = xs * xs
    for x, gx, x2 in zip(xs, values, squares):
        if not gx > 0:
            report.violations.append(Violation(float(x), "positivity", float(gx)))
        if gx > x2:
            report.violations.append(Violation(float(x), "quadratic", float(gx)))
        if g.delta_margin is not None and gx > (1.0 - g.delta_margin) * x2:
            report.violations.append(Violation(float(x), "delta", float(gx)))
    return report
