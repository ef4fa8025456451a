"""CSV emission for trajectories and sweeps.

Floats are written at 17 significant digits with '.' as the decimal
separator, '\\n' line endings, so files are bit-exact across platforms
and re-reading then re-writing a file reproduces it byte for byte.
"""

import csv
import io
from typing import List, Sequence, Tuple

import numpy as np

from src.model import InvalidConfig, Trajectory
from src.shooting import SweepResult
from src.utils import atomic_write_text, format_float

TRAJECTORY_HEADER = ("t", "f", "fp", "fpp")
SWEEP_HEADER = ("b", "type", "t0", "Tb_est", "bounded_hint")


def _render(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def uniform_times(t_final: float, dt: float) -> np.ndarray:
    """0, dt, 2 dt, ... <= t_final, snapped to 12 decimals."""
    if not dt > 0:
        raise InvalidConfig("dt", f"must be > 0, got {dt}")
    n = int(np.floor(t_final / dt + 1e-9))
    ts = np.round(np.arange(n + 1) * dt, 12)
    return ts[ts <= t_final]


def trajectory_rows(traj: Trajectory, dt: float) -> np.ndarray:
    """(t, f, f', f'') at uniform sampling, shape (n, 4)."""
    ts = uniform_times(traj.t_final, dt)
    return np.column_stack([ts, traj.evaluate(ts)])


def format_rows(data) -> List[List[str]]:
    return [[format_float(x) for x in row] for row in data]


def write_trajectory_csv(path: str, data) -> None:
    """Write rows (t, f, fp, fpp) with the `t,f,fp,fpp` header."""
    atomic_write_text(path, _render(TRAJECTORY_HEADER, format_rows(data)))


def read_trajectory_csv(path: str) -> np.ndarray:
    """Read a trajectory CSV back into an (n, 4) float array."""
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or tuple(header) != TRAJECTORY_HEADER:
            raise ValueError(f"{path}: expected header {','.join(TRAJECTORY_HEADER)}")
        rows = [[float(x) for x in row] for row in reader if row]
    return np.asarray(rows, dtype=float).reshape(-1, 4)


def sweep_rows(result: SweepResult) -> List[Tuple[str, ...]]:
    rows = []
    for row in result.rows:
        v = row.verdict
        rows.append((
            format_float(row.b),
            v.label,
            "" if v.t0 is None else format_float(v.t0),
            "" if v.tb_est is None else format_float(v.tb_est),
            "true" if v.bounded_hint else "false",
        ))
    return rows


def write_sweep_csv(path: str, result: SweepResult) -> None:
    """Write `b,type,t0,Tb_est,bounded_hint`, ascending b; blanks where n/a."""
    atomic_write_text(path, _render(SWEEP_HEADER, sweep_rows(result)))
