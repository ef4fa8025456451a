"""
Run reports: `key=value` text plus a sibling machine-readable JSON file.

`report.txt` is accompanied by `report.json`; both are written atomically.
"""

import json
import math
import os
from typing import Any, Dict, List, Tuple

# Try to use ujson for faster serialization
try:
    import ujson
    HAS_UJSON = True
except ImportError:
    HAS_UJSON = False

from src.model import CheckResult
from src.utils import atomic_write_text, format_float


class Report:
    """Ordered key/value report."""

    def __init__(self, kind: str):
        self.entries: List[Tuple[str, Any]] = [("kind", kind)]

    def add(self, key: str, value: Any) -> 'Report':
        self.entries.append((key, value))
        return self

    def add_check(self, check: CheckResult, prefix: str = "diag") -> 'Report':
        self.add(f"{prefix}.{check.name}", check.status)
        if check.value is not None:
            self.add(f"{prefix}.{check.name}.value", check.value)
        if check.detail:
            self.add(f"{prefix}.{check.name}.detail", check.detail)
        return self

    def get(self, key: str) -> Any:
        for k, v in self.entries:
            if k == key:
                return v
        raise KeyError(key)

    def as_dict(self) -> Dict[str, Any]:
        return {k: _jsonable(v) for k, v in self.entries}

    def render(self) -> str:
        return "".join(f"{k}={_text(v)}\n" for k, v in self.entries)

    def write(self, path: str) -> str:
        """Write path and its .json sibling; returns the JSON path."""
        atomic_write_text(path, self.render())
        json_path = json_sibling(path)
        if HAS_UJSON:
            payload = ujson.dumps(self.as_dict(), ensure_ascii=False, indent=2)
        else:
            payload = json.dumps(self.as_dict(), ensure_ascii=False, indent=2)
        atomic_write_text(json_path, payload + "\n")
        return json_path


def json_sibling(path: str) -> str:
    return os.path.splitext(path)[0] + ".json"


def _text(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def read_report(path: str) -> Dict[str, str]:
    """Parse a key=value report back into a dict of strings."""
    out: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if "=" in line:
                key, value = line.split("=", 1)
                out[key] = value
    return out
