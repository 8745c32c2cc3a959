"""Oracle time histories for every configured record."""

import numpy as np

from dynamics.rocking import write_rocking_csv
from dynamics.time_history import peak_drift_ratio, write_spring_trace
from pipeline.experiment import Experiment
from pipeline.oracles import FrameOracle

from .base import BaseCommand, CommandContext, CommandResult
from .run import run_blocking


def write_impacts_csv(history, path) -> None:
    rows = np.array([[e.time, e.theta_dot_before, e.theta_dot_after] for e in history.events]).reshape(-1, 3)
    np.savetxt(path, rows, delimiter=",", header="time,theta_dot_before,theta_dot_after", comments="", fmt="%.10g")


class SimulateCommand(BaseCommand):
    name = "simulate"

    async def __call__(self, context: CommandContext) -> CommandResult:
        experiment = Experiment(context.config, context.cache)
        records = experiment.records
        histories = await run_blocking(experiment.truths, records, context.config["workers"],
                                       timeout=context.config.get("timeout"))
        out = context.outputs
        lines = []
        for record, history in zip(records, histories):
            if isinstance(experiment.oracle, FrameOracle):
                main = history.to_csv(out.path(f"frame_{record.id}.csv"))
                trace = out.path(f"frame_{record.id}_springs.csv")
                write_spring_trace(history, trace)
                out.add(main, trace)
                ratio = peak_drift_ratio(history, experiment.oracle.response_scale)
                lines.append(f"{record.id}: peak drift ratio {100 * ratio:.3f}%")
            else:
                main = out.path(f"rocking_{record.id}.csv")
                write_rocking_csv(history, main)
                impacts = out.path(f"rocking_{record.id}_impacts.csv")
                write_impacts_csv(history, impacts)
                out.add(main, impacts)
                peak = float(np.max(np.abs(history.aux["theta_norm"])))
                state = "overturned" if history.aux["overturned"][-1] else f"{len(history.events)} impacts"
                lines.append(f"{record.id}: peak theta/alpha {peak:.3f}, {state}")
        stats = context.cache.stats
        return CommandResult(
            output="\n".join(lines) or "no records configured",
            system=f"history cache: {stats.hits} hits, {stats.misses} misses",
            artifacts=tuple(out.artifacts),
        )
