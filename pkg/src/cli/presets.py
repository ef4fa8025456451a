"""
Built-in run presets.

Presets live in data/presets.yaml so every closed-form or obstruction case
can be reproduced with one command (e.g. `main.py solve --preset oracle`).
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from src.model import CheckResult, GKind, InvalidConfig, ProblemSpec
from src.utils import print_debug


@dataclass
class Preset:
    """A named set of configuration values."""
    name: str
    description: str = ""
    values: Dict[str, Any] = field(default_factory=dict)


class PresetLibrary:
    """Presets loaded from a YAML file."""

    def __init__(self, path: Optional[str] = None):
        if path is None:
            project_root = Path(__file__).parent.parent.parent
            path = project_root / "data" / "presets.yaml"
        self.path = Path(path)
        self.presets: Dict[str, Preset] = {}
        self.aliases: Dict[str, str] = {}
        self._load()

    def _load(self):
        if not self.path.exists():
            raise InvalidConfig("preset", f"preset file not found: {self.path}")
        with open(self.path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}

        for entry in data.get("presets", []):
            preset = Preset(
                name=entry["name"],
                description=entry.get("description", ""),
                values=dict(entry.get("values") or {}),
            )
            self.presets[preset.name] = preset
            for alias in entry.get("aliases") or []:
                self.aliases[alias] = preset.name
        print_debug(f"Loaded {len(self.presets)} presets from {self.path}", level=6)

    def names(self) -> List[str]:
        return sorted(self.presets)

    def get(self, name: str) -> Preset:
        """Look up a preset by name or alias; unknown names raise InvalidConfig('preset')."""
        try:
            return self.presets[self.aliases.get(name, name)]
        except KeyError:
            raise InvalidConfig(
                "preset", f"unknown preset '{name}' (available: {', '.join(self.names())})"
            ) from None


@dataclass
class RegressionValue:
    """A committed b_* for one quadratic problem."""
    name: str
    beta: float
    a: float
    c: float
    b_star: float
    tolerance: float = 1e-6

    def matches(self, problem: ProblemSpec) -> bool:
        g = problem.g
        return (g.kind is GKind.QUADRATIC and g.beta == self.beta
                and problem.a == self.a and problem.c == self.c)

    def check(self, b_star: float) -> CheckResult:
        diff = abs(b_star - self.b_star)
        return CheckResult.of(
            "regression_b_star", diff <= self.tolerance,
            f"{self.name}: b_*={b_star:.12g} committed={self.b_star:.12g}",
            value=diff,
        )


class RegressionTable:
    """Committed b_* values loaded from data/regression.yaml."""

    def __init__(self, path: Optional[str] = None):
        if path is None:
            path = Path(__file__).parent.parent.parent / "data" / "regression.yaml"
        self.path = Path(path)
        self.entries: List[RegressionValue] = []
        if self.path.exists():
            with open(self.path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
            for entry in data.get("regressions", []):
                if entry.get("g", "quadratic") != "quadratic":
                    continue
                self.entries.append(RegressionValue(
                    name=entry["name"],
                    beta=float(entry["beta"]),
                    a=float(entry["a"]),
                    c=float(entry["c"]),
                    b_star=float(entry["b_star"]),
                    tolerance=float(entry.get("tolerance", 1e-6)),
                ))
        print_debug(f"Loaded {len(self.entries)} regression values from {self.path}", level=6)

    def lookup(self, problem: ProblemSpec) -> Optional[RegressionValue]:
        return next((e for e in self.entries if e.matches(problem)), None)
