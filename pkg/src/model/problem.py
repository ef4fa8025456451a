"""Problem data (a, c, g) and solver controls."""

import math
from dataclasses import dataclass, field, replace
from typing import Optional

from src import constants
from .errors import InvalidConfig
from .nonlinearity import GSpec


@dataclass(frozen=True)
class SolverControls:
    """Tolerances and limits shared by integration, classification and shooting."""

    abs_tol: float = constants.ABS_TOL
    rel_tol: float = constants.REL_TOL
    t_max: float = constants.T_MAX
    blowup_threshold: float = constants.BLOWUP_THRESHOLD
    zero_eps: float = constants.ZERO_EPS  # f' below this counts as decayed
    event_tol: float = constants.EVENT_TOL  # event localization, in t
    bisect_tol: float = constants.BISECT_TOL  # absolute, in b
    max_bisect_iters: int = constants.MAX_BISECT_ITERS
    max_steps: int = constants.MAX_STEPS
    max_doublings: int = constants.MAX_DOUBLINGS
    max_retries: int = constants.MAX_RETRIES
    sweep_points: int = constants.SWEEP_POINTS
    h_init: Optional[float] = None  # None = automatic

    def validate(self) -> 'SolverControls':
        """Raise InvalidConfig naming the first bad field; return self."""
        for name in ("abs_tol", "rel_tol", "zero_eps", "event_tol", "bisect_tol", "t_max"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidConfig(name, f"must be finite and > 0, got {value}")
        if not self.blowup_threshold >= 1e6:
            raise InvalidConfig("blowup_threshold", f"must be >= 1e6, got {self.blowup_threshold}")
        for name in ("max_bisect_iters", "max_steps", "max_doublings"):
            if getattr(self, name) < 1:
                raise InvalidConfig(name, "must be >= 1")
        if self.max_retries < 0:
            raise InvalidConfig("max_retries", "must be >= 0")
        if self.sweep_points < 0:
            raise InvalidConfig("sweep_points", "must be >= 0")
        if self.h_init is not None and not self.h_init > 0:
            raise InvalidConfig("h_init", "must be > 0")
        return self

    def with_t_max(self, t_max: float) -> 'SolverControls':
        return replace(self, t_max=float(t_max))

    def tightened(self, factor: float) -> 'SolverControls':
        """Copy with abs_tol and rel_tol divided by factor."""
        return replace(self, abs_tol=self.abs_tol / factor, rel_tol=self.rel_tol / factor)


@dataclass(frozen=True)
class ProblemSpec:
    """The family P(g; a, b, c); the slope b is supplied per call."""

    a: float  # f(0)
    c: float  # f''(0), strictly negative
    g: GSpec
    controls: SolverControls = field(default_factory=SolverControls)

    def __post_init__(self):
        if not math.isfinite(self.a):
            raise InvalidConfig("a", f"must be finite, got {self.a}")
        if not (math.isfinite(self.c) and self.c < 0):
            raise InvalidConfig("c", f"must be finite and < 0, got {self.c}")
        self.controls.validate()

    def with_controls(self, controls: SolverControls) -> 'ProblemSpec':
        return replace(self, controls=controls)
