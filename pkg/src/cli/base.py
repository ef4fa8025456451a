"""
Base command handler with decorator-based registration.

Subcommands are methods tagged with @command; the handler builds its
dispatch table from them, and main.py builds the argparse subparsers from
the same table. Handlers return a process exit code.
"""

from typing import Any, Callable, Dict, List, Optional

from src import constants


def command(*names, help_text: str = "", usage: str = "", category: str = "general"):
    """
    Decorator to register a subcommand handler method.

    Args:
        *names: Subcommand name and aliases (e.g., "solve")
        help_text: Short help description (or use function docstring)
        usage: Usage syntax shown in help
        category: Grouping in the help listing

    Example:
        @command("solve", help_text="Integrate one trajectory", category="run")
        def solve(self, config, args):
            ...
            return constants.EXIT_OK
    """
    def decorator(func: Callable) -> Callable:
        help_desc = help_text or (func.__doc__.strip().splitlines()[0] if func.__doc__ else "")

        func._command_names = [n.lower() for n in names]
        func._command_help = help_desc
        func._command_usage = usage
        func._command_category = category
        func._is_command = True

        return func
    return decorator


class CommandHandler:
    """
    Base class for command handlers with automatic registration.

    Commands are registered via the @command decorator. The handler
    builds the dispatch table and provides introspection for help text.
    """

    def __init__(self):
        self.commands: Dict[str, Dict[str, Any]] = {}
        self._register_commands()

    def _register_commands(self):
        """Scan class methods and register decorated commands."""
        for name in dir(self):
            if name.startswith('_'):
                continue

            method = getattr(self, name)
            if not callable(method):
                continue

            if hasattr(method, '_is_command'):
                for cmd_name in method._command_names:
                    self.commands[cmd_name] = {
                        'handler': method,
                        'help': method._command_help,
                        'usage': method._command_usage,
                        'category': method._command_category,
                        'method_name': name,
                    }

    def dispatch(self, cmd: str, *args, **kwargs) -> Optional[int]:
        """
        Dispatch to the registered handler.

        Returns:
            The handler's exit code, or None if cmd is not registered
        """
        entry = self.commands.get(cmd.lower())
        if entry is None:
            return None
        code = entry['handler'](*args, **kwargs)
        return constants.EXIT_OK if code is None else int(code)

    def get_command_names(self) -> List[str]:
        """Primary names of all registered commands (aliases excluded)."""
        seen, names = set(), []
        for cmd_name, info in self.commands.items():
            if info['method_name'] not in seen:
                seen.add(info['method_name'])
                names.append(cmd_name)
        return sorted(names)

    def get_commands_by_category(self) -> Dict[str, List[str]]:
        """Group primary command names by category for help display."""
        categories: Dict[str, List[str]] = {}
        for name in self.get_command_names():
            categories.setdefault(self.commands[name]['category'], []).append(name)
        return categories

    def get_help(self) -> str:
        """Command overview grouped by category, shown as the parser epilog."""
        lines = []
        for category, names in sorted(self.get_commands_by_category().items()):
            lines.append(f"{category}:")
            for name in names:
                lines.append(f"  {name:<12} {self.commands[name]['help']}")
        return "\n".join(lines)
