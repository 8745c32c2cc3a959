"""Static figures of oracle responses, plus prediction overlays when a network is given."""

from formatters.plots import hysteresis_plot, overlay_plot, rocking_plot
from pipeline.experiment import Experiment
from pipeline.oracles import FrameOracle

from .base import BaseCommand, CommandContext, CommandResult
from .evaluate import load_trained
from .run import run_blocking


class PlotCommand(BaseCommand):
    name = "plot"

    async def __call__(self, context: CommandContext) -> CommandResult:
        config = context.config
        experiment = Experiment(config, context.cache)
        records = experiment.records
        histories = await run_blocking(experiment.truths, records, config["workers"], timeout=config.get("timeout"))
        out = context.outputs
        frame = isinstance(experiment.oracle, FrameOracle)
        for record, history in zip(records, histories):
            if frame:
                out.add(hysteresis_plot(history, out.path(f"hysteresis_{record.id}.svg"), title=record.id))
            else:
                out.add(rocking_plot(history, out.path(f"rocking_{record.id}.svg"), title=record.id))

        if getattr(context.args, "network", None):
            net, normalizer, roles = load_trained(context, experiment)
            _, pairs = await run_blocking(experiment.evaluate, net, normalizer, records, roles,
                                          timeout=config.get("timeout"))
            for record_id, (pred, truth) in pairs.items():
                out.add(overlay_plot(pred, truth, out.path(f"overlay_{record_id}.svg"), title=record_id))
        return CommandResult(output=f"{len(out.artifacts)} figures written", artifacts=tuple(out.artifacts))
