"""Closed-loop rollout and the error report against the oracle."""

import csv
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ann.metrics import error_rates, peak_errors
from ann.network import DenseNetwork, forward, forward_batch
from core.errors import ArgumentError, RolloutDivergenceError
from dynamics.history import ResponseHistory, from_displacements
from pipeline.dataset import build_dataset, feature_width
from pipeline.normalizer import Normalizer
from signals.records import GroundMotionRecord

logger = logging.getLogger(__name__)

TRAINING = "Training"
VALIDATION = "Validation"
TESTING = "Testing"


def rollout(
    net: DenseNetwork,
    record: GroundMotionRecord,
    normalizer: Normalizer,
    n: int,
    steps: int | None = None,
    labels: Sequence[str] | None = None,
) -> ResponseHistory:
    """Autoregressive prediction on the record grid.

    The feature vector at every step combines the true ground motion with the
    network's own last two predictions; the structure starts at rest. The
    returned history has min(steps, npts - 1) + 1 rows, row 0 being the rest state.
    """
    if net.d_in != feature_width(n) or net.d_out != n:
        raise ArgumentError(f"network is {net.d_in}->{net.d_out}, expected {feature_width(n)}->{n}")
    available = record.npts - 1
    length = available if steps is None else max(0, min(steps, available))
    p = normalizer.ground(record.accel)
    out = np.zeros((length + 1, n))
    x = np.zeros(feature_width(n))
    for t in range(length):
        x[0] = p[t]
        x[1] = p[t - 1] if t >= 1 else 0.0
        x[2] = p[t - 2] if t >= 2 else 0.0
        x[3:3 + n] = out[t]
        x[3 + n:] = out[t - 1] if t >= 1 else 0.0
        y, _ = forward(net, x)
        if not np.all(np.isfinite(y)):
            raise RolloutDivergenceError(t + 1)
        out[t + 1] = y
    disp = normalizer.response_inverse(out)
    labels = tuple(labels) if labels else tuple(f"dof{j + 1}" for j in range(n))
    return from_displacements(record.dt, disp, labels)


def avg_error_rate(pred: ResponseHistory, truth: ResponseHistory, dof: int | None = None):
    """100 * mean|pred - truth| / max|truth| on displacements; per DOF, or one DOF if given."""
    if abs(pred.dt - truth.dt) > 1e-12 * truth.dt or pred.disp.shape != truth.disp.shape:
        raise ArgumentError("prediction and truth must share dt and length")
    if dof is None:
        return error_rates(pred.disp, truth.disp)
    return float(error_rates(pred.disp[:, dof], truth.disp[:, dof])[0])


def teacher_forced_errors(
    net: DenseNetwork, truth: ResponseHistory, record: GroundMotionRecord, normalizer: Normalizer
) -> np.ndarray:
    """Per-DOF error of one-step predictions fed with the true lagged responses."""
    series = build_dataset(truth, record, truth.ndof, normalizer)
    return error_rates(forward_batch(net, series.inputs), series.targets)


@dataclass(frozen=True)
class EvalRow:
    record_id: str
    role: str
    avg_error: tuple[float, ...]
    peak_error: tuple[float, ...]
    teacher_forced_error: tuple[float, ...]
    rollout_seconds: float = 0.0
    oracle_seconds: float | None = None  # None when the oracle history came from the cache

    @property
    def mean_avg_error(self) -> float:
        return float(np.mean(self.avg_error))

    @property
    def speedup(self) -> float | None:
        if self.oracle_seconds is None or self.rollout_seconds <= 0:
            return None
        return self.oracle_seconds / self.rollout_seconds


def _seconds(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


@dataclass
class EvalReport:
    """Per-record errors and timings, closed by a TOTAL row with the network state."""

    labels: tuple[str, ...] = ()
    rows: list[EvalRow] = field(default_factory=list)
    converged: bool | None = None
    architecture: str = ""

    @property
    def timed_rows(self) -> list[EvalRow]:
        return [r for r in self.rows if r.oracle_seconds is not None]

    @property
    def oracle_seconds(self) -> float:
        return sum(r.oracle_seconds for r in self.timed_rows)

    @property
    def rollout_seconds(self) -> float:
        return sum(r.rollout_seconds for r in self.timed_rows)

    @property
    def speedup(self) -> float:
        return self.oracle_seconds / self.rollout_seconds if self.rollout_seconds > 0 else 0.0

    def header(self) -> list[str]:
        columns = ["record_id", "role"]
        for prefix in ("avg", "peak", "tf"):
            columns.extend(f"{prefix}_{label}" for label in self.labels)
        return columns + ["oracle_s", "rollout_s", "speedup", "architecture", "converged"]

    def total_row(self) -> list[str]:
        width = 3 * len(self.labels)
        if self.rows:
            errors = np.mean([[*r.avg_error, *r.peak_error, *r.teacher_forced_error] for r in self.rows], axis=0)
            cells = [f"{v:.4f}" for v in errors]
        else:
            cells = [""] * width
        timed = bool(self.timed_rows)
        converged = "" if self.converged is None else str(self.converged).lower()
        return ["TOTAL", "", *cells,
                _seconds(self.oracle_seconds if timed else None),
                _seconds(self.rollout_seconds if timed else None),
                f"{self.speedup:.3f}" if timed else "",
                self.architecture, converged]

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(self.header())
            for row in self.rows:
                values = [*row.avg_error, *row.peak_error, *row.teacher_forced_error]
                speedup = row.speedup
                writer.writerow([row.record_id, row.role, *(f"{v:.4f}" for v in values),
                                 _seconds(row.oracle_seconds), _seconds(row.rollout_seconds),
                                 "" if speedup is None else f"{speedup:.3f}", "", ""])
            writer.writerow(self.total_row())
        return path


def evaluate_record(
    net: DenseNetwork,
    record: GroundMotionRecord,
    truth: ResponseHistory,
    normalizer: Normalizer,
    role: str = TESTING,
    oracle_seconds: float | None = None,
) -> tuple[EvalRow, ResponseHistory]:
    """Roll the network out over `record` and compare with the oracle history on the same grid."""
    start = time.perf_counter()
    pred = rollout(net, record, normalizer, truth.ndof, labels=truth.labels)
    rollout_seconds = time.perf_counter() - start
    truth = truth.truncated(pred.steps)
    row = EvalRow(
        record.id,
        role,
        tuple(float(v) for v in avg_error_rate(pred, truth)),
        tuple(float(v) for v in peak_errors(pred.disp, truth.disp)),
        tuple(float(v) for v in teacher_forced_errors(net, truth, record, normalizer)),
        rollout_seconds,
        oracle_seconds,
    )
    logger.debug("%s (%s): avg error %s", record.id, role, ", ".join(f"{v:.2f}%" for v in row.avg_error))
    return row, pred
