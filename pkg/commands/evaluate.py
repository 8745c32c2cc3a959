"""Closed-loop evaluation of a trained network."""

from pathlib import Path

import yaml

from ann.network import DenseNetwork, load_network
from formatters.plots import overlay_plot
from formatters.report_formatter import ReportFormatter
from pipeline.dataset import feature_width
from pipeline.experiment import Experiment
from pipeline.normalizer import Normalizer

from .base import BaseCommand, CommandContext, CommandError, CommandResult
from .run import run_blocking


def network_path(context: CommandContext) -> Path:
    explicit = getattr(context.args, "network", None) or context.config.get("network.path")
    return context.config.resolve(explicit) if explicit else context.config.output_dir / "network.txt"


def load_trained(context: CommandContext, experiment: Experiment) -> tuple[DenseNetwork, Normalizer, dict[str, str]]:
    """Network, its normalizer and the record roles of the training run."""
    path = network_path(context)
    if not path.is_file():
        raise CommandError(f"network file not found: {path}")
    net = load_network(path)
    n = experiment.oracle.n
    if net.d_in != feature_width(n) or net.d_out != n:
        raise CommandError(
            f"network {path} has dims {net.d_in}->{net.d_out}; "
            f"the {context.config.structure} structure expects {feature_width(n)}->{n}"
        )
    normalizer_file = path.with_name("normalizer.yaml")
    if not normalizer_file.is_file():
        raise CommandError(f"normalizer file not found: {normalizer_file}")
    roles_file = path.with_name("roles.yaml")
    roles = yaml.safe_load(roles_file.read_text()) if roles_file.is_file() else {}
    return net, Normalizer.load(normalizer_file), roles or {}


class EvalCommand(BaseCommand):
    name = "eval"

    async def __call__(self, context: CommandContext) -> CommandResult:
        experiment = Experiment(context.config, context.cache)
        net, normalizer, roles = load_trained(context, experiment)
        records = experiment.records
        await run_blocking(experiment.truths, records, context.config["workers"],
                           timeout=context.config.get("timeout"))
        report, pairs = await run_blocking(experiment.evaluate, net, normalizer, records, roles,
                                           timeout=context.config.get("timeout"))
        summary_file = network_path(context).with_name("train_summary.yaml")
        if summary_file.is_file():
            report.converged = (yaml.safe_load(summary_file.read_text()) or {}).get("converged")
        out = context.outputs
        out.add(report.to_csv(out.path("eval_report.csv")))
        if not getattr(context.args, "no_plots", False):
            for record_id, (pred, truth) in pairs.items():
                out.add(overlay_plot(pred, truth, out.path(f"overlay_{record_id}.svg"), title=record_id))
        return CommandResult(
            renderables=(ReportFormatter(context.console).eval_table(report),),
            output=f"{len(report.rows)} records evaluated with network {net.architecture}",
            artifacts=tuple(out.artifacts),
        )
