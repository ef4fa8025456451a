#!/usr/bin/env python3
"""
Heat-flux BVP solver - Entry Point

Shooting solver and verifier for f''' + f f'' + g(f') = 0,
f(0) = a, f''(0) = c < 0, f'(+inf) = 0.
"""

import argparse
import os
import sys
from datetime import datetime

from src import constants
from src.cli import FIELDS, BVPCommands
from src.utils import set_console_log_file

MAX_LOG_SIZE = 10 * 1024 * 1024  # 10MB


def _add_config_flags(parser):
    """One --key flag per configuration key (e.g. --t-max, --abs-tol)."""
    group = parser.add_argument_group("configuration (overrides file, env and preset)")
    for key, (kind, default, desc) in FIELDS.items():
        flag = f"--{key.replace('_', '-')}"
        if kind == "bool":
            group.add_argument(flag, dest=f"cfg_{key}", action="store_const",
                               const="true", default=None, help=desc)
        else:
            group.add_argument(flag, dest=f"cfg_{key}", default=None,
                               metavar=key.upper(), help=f"{desc} (default: {default})")


def build_parser(handler):
    parser = argparse.ArgumentParser(
        description="Heat-flux BVP shooting solver and verifier",
        epilog=f"commands by category:\n{handler.get_help()}",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        allow_abbrev=False,
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"hfbvp v{constants.VERSION}",
    )
    parser.add_argument(
        "-d",
        "--debug",
        nargs="?",
        type=int,
        const=2,
        default=0,
        metavar="LEVEL",
        help="Debug output level 0-6 (default when given: 2)",
    )
    parser.add_argument(
        "-l",
        "--log",
        nargs="?",
        const="~/.hfbvp.log",
        metavar="FILE",
        help="Log all console output to file (default: ~/.hfbvp.log)",
    )

    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--config", metavar="PATH", help="key=value configuration file")
    common.add_argument("--preset", metavar="NAME", help="built-in preset (data/presets.yaml)")
    _add_config_flags(common)

    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in handler.get_command_names():
        info = handler.commands[name]
        sub = subparsers.add_parser(name, parents=[common], help=info['help'],
                                    usage=info['usage'] or None, allow_abbrev=False)
        if name == "verify":
            sub.add_argument("--list", dest="list_only", action="store_true",
                             help="List criteria without running them")
            sub.add_argument("--only", metavar="NAME[,NAME]",
                             help="Run only the named criteria")
    return parser


def _open_log(path):
    """Open the console log, rotating it once it exceeds MAX_LOG_SIZE."""
    log_path = os.path.expanduser(path)
    if os.path.exists(log_path) and os.path.getsize(log_path) > MAX_LOG_SIZE:
        timestamp = datetime.now().strftime('%Y%m%d-%H%M%S')
        backup_path = f"{log_path}.{timestamp}"
        os.rename(log_path, backup_path)
        print(f"Rotated log: {backup_path}", file=sys.stderr)
    return open(log_path, 'a', buffering=1)


def main(argv=None, environ=None):
    handler = BVPCommands()
    args = build_parser(handler).parse_args(argv)
    constants.DEBUG_LEVEL = args.debug

    log_file = None
    if args.log:
        log_file = _open_log(args.log)
        set_console_log_file(log_file)

    flags = {key: getattr(args, f"cfg_{key}") for key in FIELDS}
    options = {}
    if args.command == "verify":
        options["list_only"] = args.list_only
        options["only"] = args.only.split(",") if args.only else None

    try:
        return handler.run(args.command, preset=args.preset, config_path=args.config,
                           flags=flags, environ=environ, **options)
    finally:
        if log_file:
            set_console_log_file(None)
            log_file.close()


if __name__ == "__main__":
    sys.exit(main())
