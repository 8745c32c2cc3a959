"""Console theme and logging setup for the command line."""

import logging

from rich.console import Console
from rich.logging import RichHandler
from rich.theme import Theme

THEME = Theme({
    "info": "dim cyan",
    "warning": "yellow",
    "danger": "bold red",
    "error": "red",
    "success": "bold green",
    "system": "grey70",
    "metric": "magenta",
    "artifact": "cyan",
    "command": "yellow",
})


def make_console(**kwargs) -> Console:
    return Console(theme=THEME, **kwargs)


def configure_logging(console: Console, verbose: bool = False) -> None:
    """Route the root logger through a RichHandler bound to `console`."""
    handler = RichHandler(console=console, show_path=verbose, rich_tracebacks=True, markup=False)
    handler.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))
    root = logging.getLogger()
    for existing in list(root.handlers):
        if isinstance(existing, RichHandler):
            root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
