# main.py
import argparse
import asyncio
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from dotenv import load_dotenv
from rich.console import Console
from rich.panel import Panel

from commands import ALL_COMMANDS, CommandContext, CommandManager
from commands.base import EXIT_USAGE
from core.cache import HistoryCache
from core.config import ConfigManager
from core.console import configure_logging, make_console
from core.errors import ConfigError
from output_manager import OutputManager

CONFIG_DIR = Path(__file__).parent / "config"
ARGUMENT_TYPES = {"str": str, "int": int, "float": float}


class SurrogateCLI:
    def __init__(self, console: Optional[Console] = None):
        self.console = console or make_console()
        self.config_manager = ConfigManager(CONFIG_DIR)
        self.command_manager = CommandManager(self.console)
        self.setup_commands()

    def setup_commands(self) -> None:
        """Register available commands with their YAML descriptions."""
        specs = self.config_manager.get_command_configs()
        for command_cls in ALL_COMMANDS:
            self.command_manager.register_command(command_cls(specs.get(command_cls.name)))

    def build_parser(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--config", help="experiment YAML (default: $SURROGATE_CONFIG or built-in defaults)")
        common.add_argument("--seed", type=int, help="network initialization seed")
        common.add_argument("--out", help="output directory")
        common.add_argument("--records", help="glob of AT2 record files, replacing the configured records")
        common.add_argument("--workers", type=int, help="worker processes (default: $SURROGATE_WORKERS or config)")
        common.add_argument("--no-cache", action="store_true", help="do not read or write the history cache")
        common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

        parser = argparse.ArgumentParser(
            prog=self.config_manager.cli.get("prog", "surrogate"),
            description=self.config_manager.get_description(),
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")
        for name, spec in self.config_manager.get_command_configs().items():
            sub = subparsers.add_parser(name, parents=[common], help=spec["description"],
                                        description=spec["description"])
            for argument in spec.get("arguments") or []:
                options = {k: argument[k] for k in ("help", "choices", "default", "action") if k in argument}
                if "type" in argument:
                    options["type"] = ARGUMENT_TYPES[argument["type"]]
                sub.add_argument(*argument["flags"], **options)
        return parser

    def overrides(self, args: argparse.Namespace) -> dict:
        overrides = {"seed": args.seed, "workers": args.workers}
        if args.out:
            overrides["output_dir"] = str(Path(args.out).resolve())
        if args.records:
            pattern = Path(args.records)
            overrides["records.glob"] = str(pattern if pattern.is_absolute() else Path.cwd() / pattern)
            overrides["records.paths"] = []
        if getattr(args, "which", None):
            overrides["structure"] = args.which
        return overrides

    async def run(self, args: argparse.Namespace) -> int:
        """Load the experiment and run one command."""
        configure_logging(self.console, args.verbose)
        start = time.perf_counter()

        try:
            config = self.config_manager.load_experiment(args.config, self.overrides(args))
        except ConfigError as e:
            self.console.print(Panel(e.message, title="[red]Configuration error[/red]", border_style="red"))
            outputs = OutputManager(Path(args.out) if args.out else Path("runs"), self.console)
            outputs.write_manifest(args.command, EXIT_USAGE, time.perf_counter() - start, message=e.message)
            return EXIT_USAGE

        outputs = OutputManager(config.output_dir, self.console)
        cache = HistoryCache(config.output_dir / ".cache", enabled=not args.no_cache)
        context = CommandContext(config, self.console, outputs, cache, args)
        result = await self.command_manager.handle_command(args.command, context)

        manifest = outputs.write_manifest(
            args.command, result.exit_code, time.perf_counter() - start, config.digest, config["seed"],
            result.error, extra={"cache": {"hits": cache.stats.hits, "misses": cache.stats.misses}},
        )
        if result.artifacts:
            self.console.print(outputs.artifact_table([*result.artifacts, manifest]))
        return result.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    cli = SurrogateCLI()
    try:
        args = cli.build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return asyncio.run(cli.run(args))
    except KeyboardInterrupt:
        return 1


if __name__ == "__main__":
    sys.exit(main())
