"""Result and state dataclasses.

Defines the value types passed between the layers:
- ShootState: one point (t, f, f', f'') of a shooting trajectory
- Termination: why an integration stopped
- Classification: Type I / Type II / Inconclusive verdict
- CheckResult: a named pass/fail/skipped diagnostic
- BStarResult: critical slope bracket and plateau value
- TailFit: exponential or power-law tail fit
- VProfile: the (y, v, v') chart of a Type I trajectory
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np


@dataclass(frozen=True)
class ShootState:
    """State of the first-order system at time t."""

    t: float
    f: float
    fp: float  # f'
    fpp: float  # f''


class TerminationKind(Enum):
    REACHED_TMAX = "reached_tmax"
    ZERO_CROSSING = "zero_crossing"
    BLOW_UP = "blow_up"
    STEP_UNDERFLOW = "step_underflow"


@dataclass(frozen=True)
class Termination:
    """Termination cause; t is t_max, the crossing time t0 or the T_b estimate."""

    kind: TerminationKind
    t: float

    def __str__(self):
        return f"{self.kind.value}(t={self.t:.17g})"


class ClassKind(Enum):
    TYPE_I = "I"
    TYPE_II = "II"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Classification:
    """Verdict of the Type I / Type II dichotomy."""

    kind: ClassKind
    bounded_hint: bool = False  # Type I only
    t0: Optional[float] = None  # Type II only: first f' downcrossing
    tb_est: Optional[float] = None  # Type II only: blow-up time lower estimate
    reason: str = ""  # Inconclusive only

    @classmethod
    def type_i(cls, bounded_hint: bool) -> 'Classification':
        return cls(ClassKind.TYPE_I, bounded_hint=bounded_hint)

    @classmethod
    def type_ii(cls, t0: float, tb_est: Optional[float] = None) -> 'Classification':
        return cls(ClassKind.TYPE_II, t0=t0, tb_est=tb_est)

    @classmethod
    def inconclusive(cls, reason: str) -> 'Classification':
        return cls(ClassKind.INCONCLUSIVE, reason=reason)

    @property
    def label(self) -> str:
        return self.kind.value

    @property
    def is_type_i(self) -> bool:
        return self.kind is ClassKind.TYPE_I

    @property
    def is_type_ii(self) -> bool:
        return self.kind is ClassKind.TYPE_II


PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class CheckResult:
    """Outcome of one named diagnostic."""

    name: str
    status: str  # PASS, FAIL or SKIPPED
    detail: str = ""
    value: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @classmethod
    def of(cls, name: str, ok: bool, detail: str = "",
           value: Optional[float] = None) -> 'CheckResult':
        return cls(name, PASS if ok else FAIL, detail, value)

    @classmethod
    def skipped(cls, name: str, detail: str) -> 'CheckResult':
        return cls(name, SKIPPED, detail)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "detail": self.detail,
            "value": self.value,
        }


@dataclass
class BStarResult:
    """Critical slope b_*: bracket, estimate (the Type I end) and plateau."""

    b_star: float
    b_lo: float
    b_hi: float
    mu: Optional[float]  # plateau of f on the b_hi trajectory
    iterations: int
    diagnostics: List[CheckResult] = field(default_factory=list)

    @property
    def bracket(self) -> Tuple[float, float]:
        return (self.b_lo, self.b_hi)

    @property
    def width(self) -> float:
        return self.b_hi - self.b_lo


@dataclass
class TailFit:
    """Fitted tail law over a time window."""

    mu_hat: float  # plateau (exponential) or last f (power law)
    A_hat: float
    rate_hat: float  # decay rate or log-log growth exponent
    t_start: float
    t_end: float
    residual_norm: float
    target: Optional[float] = None  # predicted rate, when known

    @property
    def window(self) -> Tuple[float, float]:
        return (self.t_start, self.t_end)


@dataclass
class VProfile:
    """v-chart of a Type I trajectory: f = sqrt(b) v(y), f' = b sqrt(y).

    Samples are ordered by increasing t, i.e. decreasing y from y = 1.
    """

    b: float
    a: float
    y: np.ndarray
    v: np.ndarray
    vp: np.ndarray  # v'(y)

    def __len__(self):
        return len(self.y)
