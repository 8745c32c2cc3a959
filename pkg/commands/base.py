from abc import ABCMeta, abstractmethod
from argparse import Namespace
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from rich.console import Console

from core.cache import HistoryCache
from core.config import ExperimentConfig
from output_manager import OutputManager

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2


@dataclass
class CommandContext:
    """Everything a command needs besides its own arguments."""

    config: ExperimentConfig
    console: Console
    outputs: OutputManager
    cache: HistoryCache
    args: Namespace = field(default_factory=Namespace)


class BaseCommand(metaclass=ABCMeta):
    """Abstract base class for the batch commands."""

    name: str
    spec: dict[str, Any]

    def __init__(self, spec: dict[str, Any] | None = None):
        self.spec = spec or {"name": self.name, "description": "", "arguments": []}

    @abstractmethod
    async def __call__(self, context: CommandContext) -> "CommandResult":
        """Executes the command in the given context."""
        ...


@dataclass(kw_only=True, frozen=True)
class CommandResult:
    """Represents the result of a command execution."""

    output: str | None = None
    error: str | None = None
    system: str | None = None
    artifacts: tuple[Path, ...] = ()
    renderables: tuple[Any, ...] = ()
    exit_code: int = EXIT_OK


class CommandFailure(CommandResult):
    """A CommandResult that represents a failure."""


class CommandError(Exception):
    """Raised when a command cannot complete; exit_code 2 marks a user or config error."""

    def __init__(self, message, exit_code: int = EXIT_USAGE):
        super().__init__(message)
        self.message = message
        self.exit_code = exit_code
