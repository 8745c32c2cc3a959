"""Per-sample SGD training and the adaptive growth loop.

The loop pretrains at lr0, then halves the learning rate whenever the
training error stops improving for `lr_halve_patience` epochs. Once the rate
has been halved below `lr_min` with the error still above the threshold the
network is saturated: it grows (widen, with every `widens_per_deepen`-th
growth a deepen instead), repairs with frozen training on the new parameters
only, and resumes normal training at lr0 / 2**growth_count.
"""

import csv
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Literal, Protocol, Sequence

import numpy as np

from ann.growth import deepen, widen
from ann.metrics import error_rates
from ann.network import DenseNetwork, backprop_cached, forward, forward_batch, sgd_step
from core.errors import ArgumentError, DivergenceError

logger = logging.getLogger(__name__)


class PairSeries(Protocol):
    inputs: np.ndarray
    targets: np.ndarray


@dataclass(frozen=True)
class GrowthPolicy:
    lr0: float = 0.5
    lr_halve_patience: int = 20
    lr_min: float = 0.5 / 2 ** 8
    error_threshold_pct: float = 3.0
    widens_per_deepen: int = 5
    frozen_iterations: int = 10_000
    pretrain_epochs: int = 200
    max_growth_steps: int = 25
    min_improvement: float = 1e-3
    max_epochs: int = 20_000
    initial_hidden: tuple[int, ...] = (5, 5)
    widen_mode: Literal["paper_random", "function_preserving"] = "paper_random"
    deepen_mode: Literal["paper_random", "near_identity"] = "paper_random"
    frozen_unit: Literal["samples", "epochs"] = "samples"

    def __post_init__(self):
        positive = ("lr0", "lr_halve_patience", "lr_min", "error_threshold_pct", "widens_per_deepen",
                    "frozen_iterations", "max_epochs")
        for name in positive:
            if not getattr(self, name) > 0:
                raise ArgumentError(f"growth policy {name} must be positive, got {getattr(self, name)}")
        if self.pretrain_epochs < 0 or self.max_growth_steps < 0:
            raise ArgumentError("pretrain_epochs and max_growth_steps must be non-negative")
        if not 0 <= self.min_improvement <= 1:
            raise ArgumentError(f"min_improvement must lie in [0, 1], got {self.min_improvement}")
        if self.frozen_unit not in ("samples", "epochs"):
            raise ArgumentError(f"frozen_unit must be 'samples' or 'epochs', got {self.frozen_unit!r}")
        object.__setattr__(self, "initial_hidden", tuple(int(h) for h in self.initial_hidden))

    def growth_kind(self, growth_number: int) -> str:
        """Kind of the growth_number-th growth event (1-based)."""
        return "deepen" if growth_number % self.widens_per_deepen == 0 else "widen"


@dataclass(frozen=True)
class EpochMetrics:
    signed_error: float  # sum of (target - output), reported as-is
    abs_error: float  # sum of |target - output|, used for control
    samples: int


@dataclass(frozen=True)
class TrainLogEntry:
    step: int
    epoch: int
    mode: str  # pretrain | normal | frozen
    lr: float
    error: float  # teacher-forced average error rate on the training series, %
    valid_error: float
    signed_error: float
    abs_error: float
    updates: int
    architecture: str
    parameters: int
    event: str = ""


@dataclass
class TrainLog:
    entries: list[TrainLogEntry] = field(default_factory=list)

    def append(self, entry: TrainLogEntry) -> None:
        if self.entries and entry.parameters < self.entries[-1].parameters:
            raise ArgumentError("architecture snapshots may never shrink")
        self.entries.append(entry)

    def events(self) -> list[str]:
        return [e.event for e in self.entries if e.event in ("widen", "deepen")]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def last(self) -> TrainLogEntry:
        return self.entries[-1]

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        names = list(TrainLogEntry.__dataclass_fields__)
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(names)
            for entry in self.entries:
                row = asdict(entry)
                writer.writerow([repr(row[n]) if isinstance(row[n], float) else row[n] for n in names])
        return path


@dataclass
class FitResult:
    net: DenseNetwork
    log: TrainLog
    converged: bool
    growth_count: int
    epochs: int


def train_epoch(net: DenseNetwork, series: PairSeries, lr: float, respect_frozen: bool = False,
                limit: int | None = None) -> EpochMetrics:
    """One SGD update per sample in chronological order.

    Errors are measured before each update. `limit` stops after that many
    samples (used to count frozen-mode iterations exactly).
    """
    inputs, targets = series.inputs, series.targets
    count = len(inputs) if limit is None else min(limit, len(inputs))
    if count == 0:
        raise ArgumentError("training series is empty")
    signed = absolute = 0.0
    for t in range(count):
        y, cache = forward(net, inputs[t])
        residual = targets[t] - y
        signed += float(np.sum(residual))
        absolute += float(np.sum(np.abs(residual)))
        if not np.isfinite(absolute):
            raise DivergenceError(f"non-finite loss at sample {t}")
        if lr:
            sgd_step(net, backprop_cached(net, cache, residual), lr, respect_frozen)
    return EpochMetrics(signed, absolute, count)


def evaluate_series(net: DenseNetwork, series: PairSeries) -> EpochMetrics:
    residual = series.targets - forward_batch(net, series.inputs)
    return EpochMetrics(float(np.sum(residual)), float(np.sum(np.abs(residual))), len(residual))


def teacher_forced_error(net: DenseNetwork, series_list: Sequence[PairSeries]) -> float:
    """Average error rate (%) over every DOF of every series, one-step predictions."""
    rates = [np.mean(error_rates(forward_batch(net, s.inputs), s.targets)) for s in series_list]
    return float(np.mean(rates))


def train_frozen(net: DenseNetwork, series_list: Sequence[PairSeries], lr: float, iterations: int) -> EpochMetrics:
    """Exactly `iterations` frozen-mode sample updates, cycling through the series in order."""
    done = 0
    signed = absolute = 0.0
    while done < iterations:
        for series in series_list:
            if done >= iterations:
                break
            metrics = train_epoch(net, series, lr, respect_frozen=True, limit=iterations - done)
            done += metrics.samples
            signed += metrics.signed_error
            absolute += metrics.abs_error
    return EpochMetrics(signed, absolute, done)


class AdaptiveTrainer:
    """Runs the adaptive growth loop on one network; single-threaded by contract."""

    def __init__(
        self,
        net: DenseNetwork,
        train_series: Sequence[PairSeries],
        valid_series: Sequence[PairSeries] | None,
        policy: GrowthPolicy,
        on_entry: Callable[[TrainLogEntry], None] | None = None,
    ):
        if not train_series or any(len(s.inputs) == 0 for s in train_series):
            raise ArgumentError("adaptive training needs non-empty training series")
        self.net = net
        self.train_series = list(train_series)
        self.valid_series = list(valid_series or [])
        self.policy = policy
        self.on_entry = on_entry
        self.log = TrainLog()
        self.lr = policy.lr0
        self.epoch = 0
        self.growth_count = 0
        self._best_valid = np.inf
        self._best_snapshot: DenseNetwork | None = None

    def _valid_error(self, train_error: float) -> float:
        if not self.valid_series:
            return train_error
        return teacher_forced_error(self.net, self.valid_series)

    def _record(self, mode: str, metrics: EpochMetrics, event: str = "") -> TrainLogEntry:
        error = teacher_forced_error(self.net, self.train_series)
        if not np.isfinite(error):
            raise DivergenceError("training error is not finite")
        valid = self._valid_error(error)
        if valid < self._best_valid:
            self._best_valid = valid
            self._best_snapshot = self.net.copy()
        entry = TrainLogEntry(
            step=len(self.log), epoch=self.epoch, mode=mode, lr=self.lr, error=error, valid_error=valid,
            signed_error=metrics.signed_error, abs_error=metrics.abs_error, updates=metrics.samples,
            architecture=self.net.architecture, parameters=self.net.parameter_count, event=event,
        )
        self.log.append(entry)
        if self.on_entry:
            self.on_entry(entry)
        return entry

    def _epoch(self, mode: str) -> TrainLogEntry | None:
        """One pass over every training series; None when the epoch diverged and was rolled back."""
        snapshot = self.net.copy()
        self.epoch += 1
        try:
            signed = absolute = 0.0
            samples = 0
            for series in self.train_series:
                metrics = train_epoch(self.net, series, self.lr)
                signed += metrics.signed_error
                absolute += metrics.abs_error
                samples += metrics.samples
            return self._record(mode, EpochMetrics(signed, absolute, samples))
        except DivergenceError as exc:
            logger.warning("epoch %d diverged at lr=%g (%s); restoring and halving", self.epoch, self.lr, exc.message)
            self.net = snapshot
            self.lr /= 2
            self._record(mode, EpochMetrics(0.0, 0.0, 0), event="diverged")
            return None

    def _grow(self) -> TrainLogEntry:
        self.growth_count += 1
        kind = self.policy.growth_kind(self.growth_count)
        seed = self.net.rng_seed + self.growth_count
        if kind == "deepen":
            self.net = deepen(self.net, self.policy.deepen_mode, seed)
        else:
            self.net = widen(self.net, self.policy.widen_mode, seed)
        self.lr = self.policy.lr0 / 2 ** self.growth_count
        logger.info("growth %d: %s -> %s, frozen repair at lr=%g", self.growth_count, kind,
                    self.net.architecture, self.lr)
        iterations = self.policy.frozen_iterations
        if self.policy.frozen_unit == "epochs":
            iterations *= sum(len(s.inputs) for s in self.train_series)
        metrics = train_frozen(self.net, self.train_series, self.lr, iterations)
        entry = self._record("frozen", metrics, event=kind)
        self.net.unfreeze_all()
        return entry

    def fit(self) -> FitResult:
        policy = self.policy
        threshold = policy.error_threshold_pct

        for _ in range(policy.pretrain_epochs):
            entry = self._epoch("pretrain")
            if entry is not None and entry.error <= threshold:
                return self._finish(True)

        if not self.log or self.log.last.error > threshold:
            best = np.inf
            stalled = 0
            while self.epoch < policy.max_epochs:
                entry = self._epoch("normal")
                if entry is None:
                    halved = True
                else:
                    if entry.error <= threshold:
                        return self._finish(True)
                    if entry.error < best * (1.0 - policy.min_improvement):
                        best, stalled = entry.error, 0
                    else:
                        stalled += 1
                    halved = stalled >= policy.lr_halve_patience
                    if halved:
                        self.lr /= 2
                        stalled = 0
                        logger.debug("epoch %d: lr halved to %g (error %.3f%%)", self.epoch, self.lr, entry.error)
                if halved and self.lr < policy.lr_min:
                    if self.growth_count >= policy.max_growth_steps:
                        logger.info("growth budget of %d exhausted", policy.max_growth_steps)
                        break
                    entry = self._grow()
                    if entry.error <= threshold:
                        return self._finish(True)
                    best, stalled = entry.error, 0
        else:
            return self._finish(True)
        return self._finish(False)

    def _finish(self, converged: bool) -> FitResult:
        """Converged runs return the network that met the threshold; otherwise the
        snapshot with the lowest validation error (the last network without validation data).
        """
        if converged:
            net = self.net
        else:
            net = self._best_snapshot or self.net
        net = net.copy()
        net.unfreeze_all()
        logger.info("training %s after %d epochs, %d growth events, architecture %s",
                    "converged" if converged else "stopped without converging",
                    self.epoch, self.growth_count, net.architecture)
        return FitResult(net, self.log, converged, self.growth_count, self.epoch)


def adaptive_fit(
    net: DenseNetwork,
    train_series: Sequence[PairSeries],
    valid_series: Sequence[PairSeries] | None,
    policy: GrowthPolicy,
    on_entry: Callable[[TrainLogEntry], None] | None = None,
) -> FitResult:
    return AdaptiveTrainer(net, train_series, valid_series, policy, on_entry).fit()
