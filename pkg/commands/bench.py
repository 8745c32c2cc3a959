"""Oracle-versus-rollout timing over many records."""

from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn

from formatters.report_formatter import ReportFormatter
from pipeline.bench import BenchRow, bench
from pipeline.experiment import Experiment

from .base import BaseCommand, CommandContext, CommandResult
from .evaluate import load_trained
from .run import run_blocking


class BenchCommand(BaseCommand):
    name = "bench"

    async def __call__(self, context: CommandContext) -> CommandResult:
        config = context.config
        experiment = Experiment(config, context.cache)
        net, normalizer, _ = load_trained(context, experiment)
        count = getattr(context.args, "count", None)
        records = experiment.bench_records(config["bench.count"] if count is None else count)
        workers = config["workers"]

        with Progress(TextColumn("{task.description}"), BarColumn(), MofNCompleteColumn(),
                      console=context.console, transient=True) as progress:
            task = progress.add_task("benchmark", total=2 * len(records))

            def on_row(row: BenchRow) -> None:
                progress.update(task, advance=1, description=f"benchmark {row.record_id}")

            report = await run_blocking(bench, experiment.oracle, records, net, normalizer, workers, on_row,
                                        timeout=config.get("timeout"))

        out = context.outputs
        out.add(report.to_csv(out.path("bench.csv")))
        single = report.sections[0]
        return CommandResult(
            renderables=(ReportFormatter(context.console).bench_table(report),),
            output=f"{len(records)} records, single-worker speedup {single.ratio:.3f}x",
            artifacts=tuple(out.artifacts),
        )
