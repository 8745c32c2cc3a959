"""One configured experiment: structure, oracle, scaled records and their roles."""

import logging
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

from ann.network import DenseNetwork, init_network
from ann.training import FitResult, GrowthPolicy, TrainLogEntry, adaptive_fit
from core.cache import HistoryCache
from core.config import ExperimentConfig
from core.errors import ConfigError
from dynamics.frame import build_frame, calibrate_stiffness
from dynamics.hht import IntegratorConfig
from dynamics.history import ResponseHistory
from dynamics.rocking import block_constants
from pipeline.dataset import SupervisedSeries, build_dataset, feature_width
from pipeline.evaluation import TESTING, TRAINING, VALIDATION, EvalReport, evaluate_record
from pipeline.normalizer import Normalizer, fit_normalizer
from pipeline.oracles import BaseOracle, FrameOracle, RockingOracle
from signals.records import GroundMotionRecord, pga, read_at2
from signals.spectrum import elastic_sa, scale_to_pga, scale_to_sa
from signals.synthetic import synthetic_record

logger = logging.getLogger(__name__)


def timed_call(oracle: BaseOracle, record: GroundMotionRecord) -> tuple[ResponseHistory, float]:
    start = time.perf_counter()
    history = oracle(record)
    return history, time.perf_counter() - start


@dataclass(frozen=True)
class ScaledRecord:
    record: GroundMotionRecord
    rule: str
    factor: float
    pga: float
    sa: float | None
    role: str


@dataclass
class TrainOutcome:
    fit: FitResult
    normalizer: Normalizer
    train_series: list[SupervisedSeries]
    valid_series: list[SupervisedSeries]


def growth_policy(config: ExperimentConfig) -> GrowthPolicy:
    options = config.section("training")
    options.pop("output_activation", None)
    if options.get("lr_min") is None:
        options["lr_min"] = options.get("lr0", GrowthPolicy.lr0) / 2 ** 8
    if "initial_hidden" in options:
        options["initial_hidden"] = tuple(options["initial_hidden"])
    return GrowthPolicy(**options)


def build_oracle(config: ExperimentConfig) -> BaseOracle:
    if config.structure == "rocking":
        block = block_constants(
            config["rocking.full_width"], config["rocking.full_height"],
            config.get("rocking.mass", 1.0), config.get("rocking.restitution"),
        )
        return RockingOracle(block, config["rocking.dt"])

    masses = config["frame.masses"]
    story_k = config.get("frame.stiffness") or calibrate_stiffness(masses, config["frame.target_periods"])
    if len(story_k) != len(masses):
        raise ConfigError(f"{len(story_k)} story stiffnesses for {len(masses)} floors", "frame.stiffness")
    frame = build_frame(
        masses, story_k, config["frame.story_height"], config["frame.yield_drift_ratio"],
        config["frame.damping_ratio"], config["frame.b"], config["frame.r0"], config["frame.cr1"],
        config["frame.cr2"],
    )
    return FrameOracle(frame, IntegratorConfig(**config.section("integrator")))


class Experiment:
    """Records, roles and cached oracle histories of one configuration."""

    def __init__(self, config: ExperimentConfig, cache: HistoryCache | None = None):
        self.config = config
        self.cache = cache or HistoryCache(None, enabled=False)
        self._truths: dict[str, ResponseHistory] = {}
        self.oracle_seconds: dict[str, float] = {}

    @cached_property
    def oracle(self) -> BaseOracle:
        return build_oracle(self.config)

    @property
    def rollout_dt(self) -> float:
        return self.config["records.rollout_dt"]

    @cached_property
    def scale_period(self) -> float:
        period = self.config.get("records.scaling.period")
        if period:
            return period
        if isinstance(self.oracle, FrameOracle):
            return float(self.oracle.frame.modal.periods[0])
        raise ConfigError("Sa scaling of rocking records needs an explicit period", "records.scaling.period")

    def raw_records(self) -> list[GroundMotionRecord]:
        if self.config.get("records.paths") or self.config.get("records.glob"):
            return [read_at2(p) for p in self.config.record_paths()]
        count = self.config["records.synthetic.count"]
        seed = self.config["records.synthetic.seed"]
        return [
            synthetic_record(seed + i, duration=self.config["records.synthetic.duration"],
                             dt=self.config["records.synthetic.dt"])
            for i in range(count)
        ]

    def _role(self, index: int, record: GroundMotionRecord) -> str:
        def picks(key: str) -> bool:
            return any(s == index if isinstance(s, int) else s == record.id for s in self.config.get(key, []))
        if picks("records.training"):
            return TRAINING
        if picks("records.validation"):
            return VALIDATION
        return TESTING

    def scale(self, record: GroundMotionRecord) -> tuple[GroundMotionRecord, float]:
        rule = self.config["records.scaling.rule"]
        target = self.config["records.scaling.target"]
        if rule == "sa":
            return scale_to_sa(record, self.scale_period, self.config["records.scaling.damping"], target)
        if rule == "pga":
            return scale_to_pga(record, target)
        return record, 1.0

    @cached_property
    def scaled_records(self) -> list[ScaledRecord]:
        rule = self.config["records.scaling.rule"]
        out = []
        for i, raw in enumerate(self.raw_records()):
            record = raw.resampled(self.rollout_dt) if raw.dt != self.rollout_dt else raw
            record, factor = self.scale(record)
            sa = None
            if rule == "sa" or isinstance(self.oracle, FrameOracle):
                sa = elastic_sa(record, self.scale_period, self.config["records.scaling.damping"])
            out.append(ScaledRecord(record, rule, factor, pga(record), sa, self._role(i, raw)))
        logger.info("%d records prepared (%s scaling)", len(out), rule)
        return out

    @property
    def records(self) -> list[GroundMotionRecord]:
        return [s.record for s in self.scaled_records]

    def by_role(self, role: str) -> list[GroundMotionRecord]:
        return [s.record for s in self.scaled_records if s.role == role]

    def roles(self) -> dict[str, str]:
        return {s.record.id: s.role for s in self.scaled_records}

    def truth(self, record: GroundMotionRecord) -> ResponseHistory:
        if record.id not in self._truths:
            def compute(r: GroundMotionRecord) -> ResponseHistory:
                history, self.oracle_seconds[r.id] = timed_call(self.oracle, r)
                return history

            self._truths[record.id] = self.cache.get_or_compute(self.oracle.to_params(), record, compute)
        return self._truths[record.id]

    def truths(self, records: Sequence[GroundMotionRecord], workers: int = 1) -> list[ResponseHistory]:
        """Oracle histories for `records`; cache misses run in a process pool when workers > 1.

        Wall time of every history computed here is kept in `oracle_seconds`.
        """
        params = self.oracle.to_params()
        missing = []
        for record in records:
            if record.id not in self._truths:
                cached = self.cache.lookup(params, record)
                if cached is None:
                    missing.append(record)
                else:
                    self._truths[record.id] = cached
        if workers > 1 and len(missing) > 1:
            with ProcessPoolExecutor(max_workers=workers, mp_context=multiprocessing.get_context("spawn")) as pool:
                computed = list(pool.map(timed_call, [self.oracle] * len(missing), missing))
        else:
            computed = [timed_call(self.oracle, r) for r in missing]
        for record, (history, seconds) in zip(missing, computed):
            self.oracle_seconds[record.id] = seconds
            self.cache.store(params, record, history)
            self._truths[record.id] = history
        return [self._truths[r.id] for r in records]

    def normalizer(self) -> Normalizer:
        training = self.by_role(TRAINING)
        if not training:
            raise ConfigError("no record is selected for training", "records.training")
        return fit_normalizer([self.truth(r) for r in training], training, self.oracle.response_scale)

    def series(self, records: Sequence[GroundMotionRecord], normalizer: Normalizer) -> list[SupervisedSeries]:
        return [build_dataset(self.truth(r), r, self.oracle.n, normalizer) for r in records]

    def initial_network(self, policy: GrowthPolicy) -> DenseNetwork:
        n = self.oracle.n
        return init_network(feature_width(n), n, self.config["seed"], policy.initial_hidden,
                            self.config.get("training.output_activation", "identity"))

    def train(self, on_entry: Callable[[TrainLogEntry], None] | None = None) -> TrainOutcome:
        policy = growth_policy(self.config)
        normalizer = self.normalizer()
        train_series = self.series(self.by_role(TRAINING), normalizer)
        valid_series = self.series(self.by_role(VALIDATION), normalizer)
        fit = adaptive_fit(self.initial_network(policy), train_series, valid_series, policy, on_entry)
        return TrainOutcome(fit, normalizer, train_series, valid_series)

    def evaluate(
        self,
        net: DenseNetwork,
        normalizer: Normalizer,
        records: Sequence[GroundMotionRecord] | None = None,
        roles: dict[str, str] | None = None,
    ) -> tuple[EvalReport, dict[str, tuple[ResponseHistory, ResponseHistory]]]:
        """Rollout report plus (prediction, truth) pairs keyed by record id."""
        records = self.records if records is None else records
        roles = self.roles() if roles is None else roles
        labels = tuple(f"dof{j + 1}" for j in range(self.oracle.n))
        report = EvalReport(labels=labels, architecture=net.architecture)
        pairs = {}
        for record in records:
            truth = self.truth(record)
            row, pred = evaluate_record(net, record, truth, normalizer, roles.get(record.id, TESTING),
                                         self.oracle_seconds.get(record.id))
            report.rows.append(row)
            pairs[record.id] = (pred, truth.truncated(pred.steps))
        return report, pairs

    def bench_records(self, count: int) -> list[GroundMotionRecord]:
        """`count` records: the configured files, or a seeded synthetic suite scaled like the rest."""
        if self.config.get("records.paths") or self.config.get("records.glob"):
            return self.records[:count]
        seed = self.config["records.synthetic.seed"]
        out = []
        for i in range(count):
            raw = synthetic_record(seed + i, duration=self.config["records.synthetic.duration"],
                                   dt=self.config["records.synthetic.dt"], record_id=f"BENCH{i:03d}")
            record = raw.resampled(self.rollout_dt) if raw.dt != self.rollout_dt else raw
            out.append(self.scale(record)[0])
        return out
