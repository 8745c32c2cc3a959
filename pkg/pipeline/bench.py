"""Oracle-versus-rollout wall-clock comparison over a set of records."""

import csv
import logging
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from ann.network import DenseNetwork
from pipeline.evaluation import rollout
from pipeline.normalizer import Normalizer
from pipeline.oracles import BaseOracle
from signals.records import GroundMotionRecord

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BenchRow:
    record_id: str
    oracle_seconds: float
    rollout_seconds: float

    @property
    def ratio(self) -> float:
        return self.oracle_seconds / self.rollout_seconds if self.rollout_seconds > 0 else 0.0


@dataclass
class BenchSection:
    workers: int
    rows: list[BenchRow] = field(default_factory=list)
    wall_seconds: float = 0.0

    @property
    def oracle_seconds(self) -> float:
        return sum(r.oracle_seconds for r in self.rows)

    @property
    def rollout_seconds(self) -> float:
        return sum(r.rollout_seconds for r in self.rows)

    @property
    def ratio(self) -> float:
        return self.oracle_seconds / self.rollout_seconds if self.rollout_seconds > 0 else 0.0

    @property
    def label(self) -> str:
        return "single" if self.workers == 1 else f"multi-{self.workers}"


@dataclass
class BenchReport:
    sections: list[BenchSection] = field(default_factory=list)

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["section", "record_id", "oracle_s", "rollout_s", "ratio"])
            for section in self.sections:
                for row in section.rows:
                    writer.writerow([section.label, row.record_id, f"{row.oracle_seconds:.6f}",
                                     f"{row.rollout_seconds:.6f}", f"{row.ratio:.3f}"])
                writer.writerow([section.label, "TOTAL", f"{section.oracle_seconds:.6f}",
                                 f"{section.rollout_seconds:.6f}", f"{section.ratio:.3f}"])
        return path


@dataclass(frozen=True, eq=False)
class BenchJob:
    oracle: BaseOracle
    net: DenseNetwork
    normalizer: Normalizer
    record: GroundMotionRecord


def time_one(job: BenchJob) -> BenchRow:
    start = time.perf_counter()
    job.oracle(job.record)
    oracle_s = time.perf_counter() - start
    start = time.perf_counter()
    rollout(job.net, job.record, job.normalizer, job.oracle.n)
    rollout_s = time.perf_counter() - start
    return BenchRow(job.record.id, oracle_s, rollout_s)


def run_section(jobs: Sequence[BenchJob], workers: int, on_row: Callable[[BenchRow], None] | None = None) -> BenchSection:
    section = BenchSection(workers)
    start = time.perf_counter()
    if workers == 1:
        results = map(time_one, jobs)
        for row in results:
            section.rows.append(row)
            if on_row:
                on_row(row)
    elif jobs:
        with ProcessPoolExecutor(max_workers=workers, mp_context=multiprocessing.get_context("spawn")) as pool:
            for row in pool.map(time_one, jobs):
                section.rows.append(row)
                if on_row:
                    on_row(row)
    section.wall_seconds = time.perf_counter() - start
    logger.info("bench %s: %d records, oracle %.3f s, rollout %.3f s, ratio %.3f",
                section.label, len(section.rows), section.oracle_seconds, section.rollout_seconds, section.ratio)
    return section


def bench(
    oracle: BaseOracle,
    records: Sequence[GroundMotionRecord],
    net: DenseNetwork,
    normalizer: Normalizer,
    workers: int = 2,
    on_row: Callable[[BenchRow], None] | None = None,
) -> BenchReport:
    """A single-worker section, then a process-pool section with max(2, workers) workers."""
    jobs = [BenchJob(oracle, net, normalizer, r) for r in records]
    return BenchReport([run_section(jobs, 1, on_row), run_section(jobs, max(2, workers), on_row)])
