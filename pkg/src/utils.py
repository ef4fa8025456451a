"""Console output and file helpers."""

import html
import os
import sys
from datetime import datetime

from prompt_toolkit import print_formatted_text as _print_pt_original
from prompt_toolkit.formatted_text import HTML, to_plain_text

from . import constants


# Console log file handle (for -l option)
_console_log_file = None


def set_console_log_file(file_handle):
    """Set the console log file handle for print_pt output."""
    global _console_log_file
    _console_log_file = file_handle


def print_pt(*args, **kwargs):
    """Wrapper for print_formatted_text that also logs to file if enabled."""
    # Bind to the current stdout so redirected streams are honoured
    kwargs.setdefault("file", sys.stdout)
    _print_pt_original(*args, **kwargs)

    if _console_log_file:
        try:
            if args:
                text = to_plain_text(args[0])
                stamp = datetime.now().strftime('%Y-%m-%d %H:%M:%S')
                for line in text.split('\n'):
                    _console_log_file.write(f"[{stamp}] {line}\n")
                _console_log_file.flush()
        except Exception as e:
            print(f"[LOGGING ERROR] {type(e).__name__}: {e}", file=sys.__stderr__)


def _sanitize_for_html(text):
    """Remove control characters and escape HTML entities."""
    text_str = str(text)
    filtered = "".join(
        (
            c
            if (c >= " " and c != "\x7f") or c in "\n\r\t"
            else f"\\x{ord(c):02x}"
        )
        for c in text_str
    )
    return html.escape(filtered, quote=False)


def print_header(text):
    """Print a colored header."""
    print_pt(HTML(f"\n<b><cyan>{'='*70}</cyan></b>"))
    print_pt(HTML(f"<b><cyan>{_sanitize_for_html(text)}</cyan></b>"))
    print_pt(HTML(f"<b><cyan>{'='*70}</cyan></b>"))


def print_info(text):
    """Print info message."""
    print_pt(HTML(f"<green>[INFO]</green> {_sanitize_for_html(text)}"))


def print_error(text):
    """Print error message."""
    print_pt(HTML(f"<red>[ERROR]</red> {_sanitize_for_html(text)}"))


def print_warning(text):
    """Print warning message."""
    print_pt(HTML(f"<orange>[WARNING]</orange> {_sanitize_for_html(text)}"))


def print_debug(text, level=2):
    """Print debug message when DEBUG_LEVEL >= level.

    Args:
        text: The message to print
        level: Debug level (default=2 for run-level events)
               3 = per-integration summaries
               5 = per-probe detail
               6 = step rejections
    """
    if constants.DEBUG_LEVEL >= level:
        ts = datetime.now().strftime("%H:%M:%S.%f")[:-3]
        print_pt(HTML(f"<gray>[DEBUG {ts}]</gray> {_sanitize_for_html(text)}"))


def print_table_row(cols, widths, header=False):
    """Print a formatted table row."""
    row = "  "
    for col, width in zip(cols, widths):
        row += str(col).ljust(width) + "  "

    if header:
        print_pt(HTML(f"<b>{_sanitize_for_html(row)}</b>"))
        print_pt("  " + "-" * (sum(widths) + len(widths) * 2))
    else:
        print_pt(row)


def format_float(x):
    """Format a float at 17 significant digits, locale independent."""
    return format(float(x), constants.CSV_PRECISION)


def atomic_write_text(path, text):
    """Write text to path via a temp file and an atomic rename."""
    temp_file = f"{path}.tmp"
    try:
        with open(temp_file, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(temp_file, path)
    except Exception:
        if os.path.exists(temp_file):
            try:
                os.remove(temp_file)
            except OSError:
                pass
        raise
