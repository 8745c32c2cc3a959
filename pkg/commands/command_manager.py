# commands/command_manager.py
import logging
from typing import Dict

from rich.console import Console
from rich.panel import Panel

from core.errors import (
    ArgumentError,
    ConfigError,
    CountMismatchError,
    DegenerateInputError,
    ParseError,
    SurrogateError,
    UnsupportedGeometryError,
)

from .base import EXIT_INTERNAL, EXIT_USAGE, BaseCommand, CommandContext, CommandError, CommandFailure, CommandResult

logger = logging.getLogger(__name__)

USER_ERRORS = (ArgumentError, ConfigError, CountMismatchError, DegenerateInputError, ParseError,
               UnsupportedGeometryError, FileNotFoundError)


class CommandManager:
    """Manages command registration, execution, and result display."""

    def __init__(self, console: Console):
        self.commands: Dict[str, BaseCommand] = {}
        self.console = console

    def register_command(self, command: BaseCommand) -> None:
        """Register a command with the manager."""
        self.commands[command.name] = command

    async def handle_command(self, name: str, context: CommandContext) -> CommandResult:
        """Run a command and convert every failure into a CommandFailure with an exit code."""
        if name not in self.commands:
            result = CommandFailure(error=f"Unknown command: {name}", exit_code=EXIT_USAGE)
            self.display_result(result, name)
            return result

        self.console.print(Panel(
            f"[bold]config:[/bold] {context.config.source or 'built-in defaults'}  "
            f"[bold]structure:[/bold] {context.config.structure}  "
            f"[bold]seed:[/bold] {context.config['seed']}",
            title=f"[command]{name}[/command]",
            subtitle=self.commands[name].spec.get("description"),
            border_style="yellow",
        ))

        try:
            result = await self.commands[name](context)
        except CommandError as e:
            result = CommandFailure(error=e.message, exit_code=e.exit_code)
        except USER_ERRORS as e:
            result = CommandFailure(error=getattr(e, "message", str(e)), exit_code=EXIT_USAGE)
        except SurrogateError as e:
            logger.debug("command %s failed", name, exc_info=True)
            result = CommandFailure(error=e.message, exit_code=EXIT_INTERNAL)
        except Exception as e:
            logger.exception("internal error in %s", name)
            result = CommandFailure(error=f"{type(e).__name__}: {e}", exit_code=EXIT_INTERNAL)

        self.display_result(result, name)
        return result

    def display_result(self, result: CommandResult, name: str) -> None:
        """Display command result with appropriate formatting."""
        if result.system:
            self.console.print(f"[system]{result.system}[/system]")

        for renderable in result.renderables:
            self.console.print(renderable)

        if result.output:
            self.console.print(Panel(
                result.output,
                title=f"[yellow]{name} output[/yellow]",
                border_style="yellow",
            ))

        if result.error:
            self.console.print(Panel(
                result.error,
                title="[red]Error[/red]",
                border_style="red",
            ))
