"""
Layered run configuration.

Every value is resolved from, in decreasing precedence:

    command-line flag > HFBVP_<KEY> environment variable > --config file
    > --preset > built-in default

Config files are flat `key=value` text; `#` starts a comment.
"""

import os
from typing import Any, Dict, Mapping, Optional

from src import constants
from src.model import GSpec, InvalidConfig, ProblemSpec, SolverControls
from src.utils import print_debug

from .presets import PresetLibrary

# key -> (kind, default, description)
FIELDS: Dict[str, tuple] = {
    "a": ("float", 0.0, "f(0)"),
    "c": ("float", None, "f''(0), must be < 0"),
    "b": ("float", None, "shooting slope f'(0)"),
    "beta": ("float", 0.5, "g(x) = beta x^2"),
    "g": ("choice", "quadratic", "quadratic | oracle | polynomial"),
    "coeffs": ("floats", None, "polynomial g coefficients, ascending, comma-separated"),
    "m": ("float", None, "m-equation parameter in (-1, -1/2)"),
    "t_max": ("float", constants.T_MAX, "integration horizon"),
    "abs_tol": ("float", constants.ABS_TOL, "absolute tolerance"),
    "rel_tol": ("float", constants.REL_TOL, "relative tolerance"),
    "bisect_tol": ("float", constants.BISECT_TOL, "bisection stop width in b"),
    "zero_eps": ("float", constants.ZERO_EPS, "f' decay threshold"),
    "event_tol": ("float", constants.EVENT_TOL, "event localization tolerance in t"),
    "blowup_threshold": ("float", constants.BLOWUP_THRESHOLD, "blow-up threshold on |f'| + |f''|"),
    "dt": ("float", 0.05, "CSV sampling step"),
    "b_min": ("float", None, "sweep grid start"),
    "b_max": ("float", None, "sweep grid end"),
    "n": ("int", 64, "sweep grid points"),
    "out": ("str", None, "output path"),
    "override": ("bool", False, "allow g outside the proved family"),
    "workers": ("int", 1, "processes for sweeps"),
}

G_CHOICES = ("quadratic", "oracle", "polynomial")
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}

CONTROL_KEYS = ("t_max", "abs_tol", "rel_tol", "bisect_tol", "zero_eps",
                "event_tol", "blowup_threshold")


def env_name(key: str) -> str:
    return f"{constants.ENV_PREFIX}{key.upper()}"


def parse_value(key: str, raw: Any) -> Any:
    """Convert a raw (string or YAML) value for key; blank means unset."""
    if key not in FIELDS:
        raise InvalidConfig(key, "unknown configuration key")
    kind = FIELDS[key][0]
    if raw is None:
        return None
    if isinstance(raw, str):
        raw = raw.strip()
        if raw == "":
            return None

    try:
        if kind == "float":
            return float(raw)
        if kind == "int":
            value = float(raw)
            if value != int(value):
                raise ValueError
            return int(value)
        if kind == "floats":
            if isinstance(raw, (list, tuple)):
                return tuple(float(x) for x in raw)
            return tuple(float(x) for x in str(raw).split(",") if x.strip())
        if kind == "bool":
            if isinstance(raw, bool):
                return raw
            text = str(raw).lower()
            if text in _TRUE:
                return True
            if text in _FALSE:
                return False
            raise ValueError
    except (TypeError, ValueError):
        raise InvalidConfig(key, f"invalid {kind} value {raw!r}") from None

    text = str(raw)
    if kind == "choice" and text.lower() not in G_CHOICES:
        raise InvalidConfig(key, f"must be one of {', '.join(G_CHOICES)}, got {text!r}")
    return text.lower() if kind == "choice" else text


class RunConfig:
    """Flat key=value run configuration with provenance per key."""

    def __init__(self):
        self.settings: Dict[str, Any] = {k: spec[1] for k, spec in FIELDS.items()}
        self.sources: Dict[str, str] = {k: "default" for k in FIELDS}

    def set(self, key: str, raw: Any, source: str = "flag") -> None:
        key = key.strip().lower()
        self.settings[key] = parse_value(key, raw)
        self.sources[key] = source
        print_debug(f"config {key}={self.settings[key]!r} ({source})", level=6)

    def apply_preset(self, name: str, library: Optional[PresetLibrary] = None) -> None:
        preset = (library or PresetLibrary()).get(name)
        for key, value in preset.values.items():
            self.set(key, value, source=f"preset:{name}")

    def load_file(self, path: str) -> None:
        """Read a key=value file; errors name the offending key."""
        if not os.path.exists(path):
            raise InvalidConfig("config", f"file not found: {path}")
        with open(path, "r", encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise InvalidConfig("config", f"{path}:{lineno}: expected key=value")
                key, value = line.split("=", 1)
                self.set(key, value, source=f"file:{path}")

    def apply_env(self, environ: Optional[Mapping[str, str]] = None) -> None:
        environ = os.environ if environ is None else environ
        for key in FIELDS:
            name = env_name(key)
            if name in environ:
                self.set(key, environ[name], source=f"env:{name}")

    def apply_flags(self, flags: Mapping[str, Any]) -> None:
        for key, value in flags.items():
            if value is not None:
                self.set(key, value, source="flag")

    @classmethod
    def layered(cls, preset: Optional[str] = None, config_path: Optional[str] = None,
                environ: Optional[Mapping[str, str]] = None,
                flags: Optional[Mapping[str, Any]] = None) -> 'RunConfig':
        """Build a configuration from every layer, lowest precedence first."""
        cfg = cls()
        if preset:
            cfg.apply_preset(preset)
        if config_path:
            cfg.load_file(config_path)
        cfg.apply_env(environ)
        if flags:
            cfg.apply_flags(flags)
        return cfg

    def get(self, key: str) -> Any:
        return self.settings[key]

    def require(self, key: str) -> Any:
        value = self.settings[key]
        if value is None:
            raise InvalidConfig(key, "is required but not set")
        return value

    def controls(self) -> SolverControls:
        return SolverControls(**{k: self.require(k) for k in CONTROL_KEYS}).validate()

    def gspec(self) -> GSpec:
        kind = self.require("g")
        if kind == "oracle":
            return GSpec.oracle_cubic()
        if kind == "polynomial":
            return GSpec.polynomial(self.require("coeffs"))
        return GSpec.quadratic(self.require("beta"))

    def problem(self) -> ProblemSpec:
        return ProblemSpec(
            a=self.require("a"),
            c=self.require("c"),
            g=self.gspec(),
            controls=self.controls(),
        )

    def as_dict(self) -> Dict[str, Any]:
        return dict(self.settings)
