"""Command-line front end.

- base.py: @command registration and dispatch
- commands.py: solve, shoot, sweep, verify, transform
- config.py: layered key=value run configuration
- presets.py: YAML presets and committed b_* values (data/)
- csvio.py, report.py: bit-exact CSV and key=value/JSON reports
- acceptance.py: the acceptance suite behind `verify`
"""

from .base import command, CommandHandler
from .commands import BVPCommands, print_kv
from .config import RunConfig, FIELDS, parse_value, env_name
from .presets import PresetLibrary, Preset, RegressionTable, RegressionValue
from .csvio import (
    write_trajectory_csv, read_trajectory_csv, trajectory_rows, uniform_times,
    write_sweep_csv, TRAJECTORY_HEADER, SWEEP_HEADER,
)
from .report import Report, read_report, json_sibling
from .acceptance import AcceptanceContext, CRITERIA, list_criteria, select, run_criteria

__all__ = [
    'command', 'CommandHandler', 'BVPCommands', 'print_kv',
    'RunConfig', 'FIELDS', 'parse_value', 'env_name',
    'PresetLibrary', 'Preset', 'RegressionTable', 'RegressionValue',
    'write_trajectory_csv', 'read_trajectory_csv', 'trajectory_rows', 'uniform_times',
    'write_sweep_csv', 'TRAJECTORY_HEADER', 'SWEEP_HEADER',
    'Report', 'read_report', 'json_sibling',
    'AcceptanceContext', 'CRITERIA', 'list_criteria', 'select', 'run_criteria',
]
