# formatters/report_formatter.py
from typing import Optional, Sequence

from rich import box
from rich.console import Console
from rich.table import Table

from ann.training import TrainLog
from pipeline.bench import BenchReport
from pipeline.evaluation import EvalReport


class ReportFormatter:
    """Renders evaluation, training, benchmark and scaling results as rich tables."""

    def __init__(self, console: Optional[Console] = None):
        self.console = console or Console()

    def eval_table(self, report: EvalReport) -> Table:
        table = Table(title="Average error rate (%)", box=box.SIMPLE_HEAVY)
        table.add_column("Record", style="command")
        table.add_column("Role")
        for label in report.labels:
            table.add_column(label, justify="right", style="metric")
        table.add_column("peak", justify="right")
        table.add_column("one-step", justify="right", style="info")
        for row in report.rows:
            table.add_row(
                row.record_id,
                row.role,
                *(f"{v:.2f}" for v in row.avg_error),
                f"{max(row.peak_error):.2f}",
                f"{sum(row.teacher_forced_error) / len(row.teacher_forced_error):.2f}",
            )
        if report.timed_rows:
            table.caption = (f"oracle {report.oracle_seconds:.3f} s, rollout {report.rollout_seconds:.3f} s, "
                             f"speedup {report.speedup:.1f}x")
        return table

    def train_table(self, log: TrainLog, tail: int = 5) -> Table:
        """Growth events plus the last `tail` entries."""
        table = Table(title="Adaptive training", box=box.SIMPLE_HEAVY)
        for name, justify in (("step", "right"), ("epoch", "right"), ("mode", "left"), ("lr", "right"),
                              ("error %", "right"), ("valid %", "right"), ("architecture", "left"),
                              ("event", "left")):
            table.add_column(name, justify=justify)
        entries = log.entries
        shown = [e for e in entries[:-tail] if e.event] + entries[-tail:]
        for e in shown:
            table.add_row(str(e.step), str(e.epoch), e.mode, f"{e.lr:.3g}", f"{e.error:.3f}",
                          f"{e.valid_error:.3f}", e.architecture, f"[warning]{e.event}[/warning]" if e.event else "")
        return table

    def bench_table(self, report: BenchReport) -> Table:
        table = Table(title="Oracle vs rollout", box=box.SIMPLE_HEAVY)
        for name in ("section", "records", "oracle s", "rollout s", "ratio", "wall s"):
            table.add_column(name, justify="left" if name == "section" else "right")
        for s in report.sections:
            table.add_row(s.label, str(len(s.rows)), f"{s.oracle_seconds:.3f}", f"{s.rollout_seconds:.3f}",
                          f"[metric]{s.ratio:.3f}[/metric]", f"{s.wall_seconds:.3f}")
        return table

    def scale_table(self, rows: Sequence) -> Table:
        table = Table(title="Scale factors", box=box.SIMPLE_HEAVY)
        for name in ("Record", "Role", "Rule", "Factor", "PGA (g)", "Sa (g)"):
            table.add_column(name, justify="left" if name in ("Record", "Role", "Rule") else "right")
        for r in rows:
            table.add_row(r.record.id, r.role, r.rule, f"{r.factor:.4f}", f"{r.pga:.4f}",
                          "" if r.sa is None else f"{r.sa:.4f}")
        return table
