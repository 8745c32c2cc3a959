"""Record scaling table and scaled AT2 files."""

import csv

from pipeline.experiment import Experiment
from formatters.report_formatter import ReportFormatter
from signals.records import write_at2, write_record_csv

from .base import BaseCommand, CommandContext, CommandResult
from .run import run_blocking


class ScaleCommand(BaseCommand):
    name = "scale"

    async def __call__(self, context: CommandContext) -> CommandResult:
        experiment = Experiment(context.config, context.cache)
        rows = await run_blocking(lambda: experiment.scaled_records, timeout=context.config.get("timeout"))
        out = context.outputs
        table_path = out.path("scale_factors.csv")
        with open(table_path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["record_id", "role", "rule", "factor", "pga_g", "sa_g"])
            for r in rows:
                writer.writerow([r.record.id, r.role, r.rule, f"{r.factor:.6f}", f"{r.pga:.6f}",
                                 "" if r.sa is None else f"{r.sa:.6f}"])
        out.add(table_path)
        for r in rows:
            out.add(write_at2(r.record, out.path(f"scaled/{r.record.id}.AT2")))
            out.add(write_record_csv(r.record, out.path(f"scaled/{r.record.id}.csv")))
        return CommandResult(
            renderables=(ReportFormatter(context.console).scale_table(rows),),
            output=f"{len(rows)} records scaled",
            artifacts=tuple(out.artifacts),
        )
