"""Adaptive training on the configured training motions."""

import yaml
from rich.progress import Progress, SpinnerColumn, TextColumn, TimeElapsedColumn

from ann.network import save_network
from ann.training import TrainLogEntry
from formatters.report_formatter import ReportFormatter
from pipeline.evaluation import TRAINING
from pipeline.experiment import Experiment

from .base import BaseCommand, CommandContext, CommandResult
from .run import run_blocking


class TrainCommand(BaseCommand):
    name = "train"

    async def __call__(self, context: CommandContext) -> CommandResult:
        config = context.config
        experiment = Experiment(config, context.cache)
        await run_blocking(experiment.truths, experiment.records, config["workers"], timeout=config.get("timeout"))

        with Progress(SpinnerColumn(), TextColumn("{task.description}"), TimeElapsedColumn(),
                      console=context.console, transient=True) as progress:
            task = progress.add_task("training", total=None)

            def on_entry(entry: TrainLogEntry) -> None:
                progress.update(task, description=(
                    f"epoch {entry.epoch} [{entry.mode}] lr={entry.lr:.3g} "
                    f"error={entry.error:.3f}% {entry.architecture}"
                ))

            outcome = await run_blocking(experiment.train, on_entry, timeout=config.get("timeout"))

        fit = outcome.fit
        out = context.outputs
        network_path = save_network(fit.net, out.path("network.txt"))
        log_path = fit.log.to_csv(out.path("train_log.csv"))
        normalizer_path = outcome.normalizer.save(out.path("normalizer.yaml"))
        roles_path = out.path("roles.yaml")
        roles_path.write_text(yaml.safe_dump(experiment.roles(), sort_keys=True))

        report, _ = experiment.evaluate(fit.net, outcome.normalizer, experiment.by_role(TRAINING))
        report.converged = fit.converged
        report_path = report.to_csv(out.path("eval_training.csv"))

        last = fit.log.last
        summary = {
            "converged": fit.converged,
            "architecture": fit.net.architecture,
            "parameters": fit.net.parameter_count,
            "growth_events": fit.log.events(),
            "epochs": fit.epochs,
            "final_error_pct": float(last.error),
            "final_lr": float(last.lr),
        }
        summary_path = out.path("train_summary.yaml")
        summary_path.write_text(yaml.safe_dump(summary, sort_keys=False))
        out.add(network_path, log_path, normalizer_path, roles_path, report_path, summary_path)

        formatter = ReportFormatter(context.console)
        status = "converged" if fit.converged else "[warning]not converged[/warning] (budget exhausted)"
        return CommandResult(
            renderables=(formatter.train_table(fit.log), formatter.eval_table(report)),
            output=(
                f"{status}: architecture {fit.net.architecture}, {fit.growth_count} growth events, "
                f"{fit.epochs} epochs, training error {last.error:.3f}%"
            ),
            artifacts=tuple(out.artifacts),
        )
