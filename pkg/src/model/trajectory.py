"""Dense trajectory record.

A Trajectory stores the accepted nodes of an integration plus, for every
accepted step, the five coefficient vectors of the continuous extension

    y(t0 + theta h) = r1 + theta (r2 + (1-theta) (r3 + theta (r4 + (1-theta) r5)))

With r5 = 0 this is cubic Hermite interpolation, which is how synthetic
trajectories built from sampled data are represented.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import OutOfRange
from .models import ShootState, Termination, TerminationKind
from .problem import ProblemSpec


@dataclass
class Trajectory:
    """Record of (t, f, f', f'') along one shooting run."""

    problem: ProblemSpec
    b: float
    t: np.ndarray  # (N+1,) node times, strictly increasing, t[0] = 0
    y: np.ndarray  # (N+1, 3) node states (f, f', f'')
    rcont: np.ndarray  # (N, 5, 3) continuous-extension coefficients
    h: np.ndarray  # (N,) full step lengths; the last segment may be truncated
    termination: Termination
    zero_crossing: Optional[float] = None  # first f' downcrossing, if seen
    steps_rejected: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def t_final(self) -> float:
        return float(self.t[-1])

    @property
    def f(self) -> np.ndarray:
        return self.y[:, 0]

    @property
    def fp(self) -> np.ndarray:
        return self.y[:, 1]

    @property
    def fpp(self) -> np.ndarray:
        return self.y[:, 2]

    @property
    def steps(self) -> int:
        return len(self.h)

    @property
    def final_state(self) -> ShootState:
        f, fp, fpp = self.y[-1]
        return ShootState(self.t_final, float(f), float(fp), float(fpp))

    def _check_range(self, ts) -> np.ndarray:
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        if ts.size and (ts.min() < 0.0 or ts.max() > self.t_final):
            raise OutOfRange(
                f"query outside [0, {self.t_final:.17g}]: "
                f"[{ts.min():.17g}, {ts.max():.17g}]"
            )
        return ts

    def evaluate(self, ts) -> np.ndarray:
        """Dense states at the times ts, shape (len(ts), 3)."""
        ts = self._check_range(ts)
        if len(self.h) == 0:
            return np.repeat(self.y[:1], len(ts), axis=0)

        idx = np.clip(np.searchsorted(self.t, ts, side="right") - 1, 0, len(self.h) - 1)
        theta = ((ts - self.t[idx]) / self.h[idx])[:, None]
        r = self.rcont[idx]
        out = r[:, 0] + theta * (r[:, 1] + (1.0 - theta) * (
            r[:, 2] + theta * (r[:, 3] + (1.0 - theta) * r[:, 4])))

        # Nodes are returned exactly
        node = np.searchsorted(self.t, ts, side="left")
        node = np.clip(node, 0, len(self.t) - 1)
        hit = self.t[node] == ts
        out[hit] = self.y[node[hit]]
        return out

    def derivative(self, ts) -> np.ndarray:
        """Time derivative of the continuous extension at ts, shape (len(ts), 3).

        Column 2 is f''' read off the interpolant of f'', independent of the
        equation the trajectory was integrated for.
        """
        ts = self._check_range(ts)
        if len(self.h) == 0:
            return np.zeros((len(ts), 3))
        idx = np.clip(np.searchsorted(self.t, ts, side="right") - 1, 0, len(self.h) - 1)
        theta = ((ts - self.t[idx]) / self.h[idx])[:, None]
        s = 1.0 - theta
        r = self.rcont[idx]
        p = r[:, 3] + s * r[:, 4]
        q = r[:, 2] + theta * p
        dq = p - theta * r[:, 4]
        big_r = r[:, 1] + s * q
        dr = s * dq - q
        return (big_r + theta * dr) / self.h[idx][:, None]

    def state_at(self, t: float) -> ShootState:
        f, fp, fpp = self.evaluate([t])[0]
        return ShootState(float(t), float(f), float(fp), float(fpp))

    def dense_grid(self, per_step: int = 8,
                   max_dt: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
        """Times and states at per_step sub-samples of every accepted step.

        With max_dt set, long steps are subdivided further so that no
        spacing exceeds max_dt. Node times are included.
        """
        if len(self.h) == 0:
            return self.t.copy(), self.y.copy()
        pieces = []
        spans = np.diff(self.t)
        for t0, span in zip(self.t[:-1], spans):
            n = per_step
            if max_dt is not None:
                n = max(n, int(np.ceil(span / max_dt)))
            pieces.append(t0 + span * np.arange(n) / n)
        pieces.append(self.t[-1:])
        ts = np.concatenate(pieces)
        return ts, self.evaluate(ts)

    @classmethod
    def from_samples(cls, problem: ProblemSpec, b: float,
                     t: Sequence[float], f: Sequence[float], fp: Sequence[float],
                     fpp: Sequence[float], fppp: Optional[Sequence[float]] = None,
                     termination: Optional[Termination] = None) -> 'Trajectory':
        """Build a trajectory from sampled data using cubic Hermite segments.

        fppp supplies f''' for the Hermite slope of f''; when omitted it is
        estimated with numpy.gradient.
        """
        t = np.asarray(t, dtype=float)
        y = np.column_stack([f, fp, fpp]).astype(float)
        if fppp is None:
            fppp = np.gradient(y[:, 2], t)
        dy = np.column_stack([y[:, 1], y[:, 2], np.asarray(fppp, dtype=float)])
        h = np.diff(t)
        if np.any(h <= 0):
            raise ValueError("sample times must be strictly increasing")
        r1 = y[:-1]
        r2 = y[1:] - y[:-1]
        r3 = h[:, None] * dy[:-1] - r2
        r4 = r2 - h[:, None] * dy[1:] - r3
        r5 = np.zeros_like(r1)
        rcont = np.stack([r1, r2, r3, r4, r5], axis=1)
        if termination is None:
            termination = Termination(TerminationKind.REACHED_TMAX, float(t[-1]))
        return cls(problem=problem, b=float(b), t=t, y=y, rcont=rcont, h=h,
                   termination=termination)
