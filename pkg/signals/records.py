"""Ground-motion records: PEER AT2 parsing and writing, resampling and CSV export."""

import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from core.errors import ArgumentError, CountMismatchError, ParseError

logger = logging.getLogger(__name__)

G = 9.81  # m/s^2
G_IN = 386.1  # in/s^2

VALUES_PER_LINE = 5

_NPTS_RE = re.compile(r"NPTS\s*=\s*([0-9]+)", re.IGNORECASE)
_DT_RE = re.compile(r"DT\s*=\s*([-+0-9.EeDd]+)", re.IGNORECASE)


def _frozen(values: Sequence[float] | np.ndarray) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeries:
    dt: float
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))
        if not self.dt > 0:
            raise ArgumentError(f"time step must be positive, got {self.dt}")
        if not np.all(np.isfinite(self.values)):
            raise ArgumentError("time series contains non-finite samples")

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.values)) * self.dt

    @property
    def duration(self) -> float:
        return (len(self.values) - 1) * self.dt


@dataclass(frozen=True, eq=False)
class GroundMotionRecord:
    """A uniformly sampled horizontal ground acceleration in units of g."""

    id: str
    dt: float
    accel: np.ndarray
    source_meta: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "accel", _frozen(self.accel))
        object.__setattr__(self, "source_meta", tuple(self.source_meta))
        if not self.dt > 0:
            raise ArgumentError(f"record {self.id}: dt must be positive, got {self.dt}")
        if len(self.accel) < 2:
            raise ArgumentError(f"record {self.id}: at least 2 samples are required")
        if not np.all(np.isfinite(self.accel)):
            raise ArgumentError(f"record {self.id}: acceleration contains non-finite values")

    @property
    def npts(self) -> int:
        return len(self.accel)

    @property
    def duration(self) -> float:
        return (self.npts - 1) * self.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.npts) * self.dt

    def scaled(self, factor: float) -> "GroundMotionRecord":
        return GroundMotionRecord(self.id, self.dt, self.accel * factor, self.source_meta)

    def negated(self) -> "GroundMotionRecord":
        return GroundMotionRecord(self.id, self.dt, -self.accel, self.source_meta)

    def as_series(self) -> TimeSeries:
        return TimeSeries(self.dt, self.accel)

    def resampled(self, new_dt: float) -> "GroundMotionRecord":
        series = resample(self.as_series(), new_dt)
        return GroundMotionRecord(self.id, series.dt, series.values, self.source_meta)


def parse_at2(text: str, record_id: str = "record") -> GroundMotionRecord:
    """Parse PEER AT2 content: three free-text lines, an NPTS/DT line, then values in g."""
    lines = text.splitlines()
    if len(lines) < 4:
        raise ParseError("AT2 content needs 4 header lines", line=len(lines) + 1)

    header = lines[3]
    npts_match = _NPTS_RE.search(header)
    if npts_match is None:
        raise ParseError("missing or garbled NPTS token", line=4)
    dt_match = _DT_RE.search(header)
    if dt_match is None:
        raise ParseError("missing or garbled DT token", line=4)
    npts = int(npts_match.group(1))
    try:
        dt = float(dt_match.group(1).rstrip(",").replace("D", "E").replace("d", "e"))
    except ValueError:
        raise ParseError(f"DT value {dt_match.group(1)!r} is not a number", line=4) from None
    if not dt > 0 or not math.isfinite(dt):
        raise ParseError(f"DT must be positive, got {dt}", line=4)

    values: list[float] = []
    position = 0
    for line_no, line in enumerate(lines[4:], start=5):
        for token in line.split():
            position += 1
            try:
                values.append(float(token))
            except ValueError:
                raise ParseError(f"non-numeric value {token!r}", line=line_no, token=position) from None

    if len(values) != npts:
        raise CountMismatchError(npts, len(values))

    logger.debug("parsed AT2 record %s: npts=%d dt=%g", record_id, npts, dt)
    return GroundMotionRecord(record_id, dt, values, tuple(lines[:4]))


def read_at2(path: str | Path) -> GroundMotionRecord:
    path = Path(path)
    return parse_at2(path.read_text(), record_id=path.stem)


def serialize_at2(record: GroundMotionRecord) -> str:
    """Write a record back to AT2 layout, 5 values per line with 7 significant digits."""
    meta = list(record.source_meta[:3])
    defaults = [
        f"{record.id}",
        "SYNTHETIC OR SCALED RECORD",
        "ACCELERATION TIME SERIES IN UNITS OF G",
    ]
    meta += defaults[len(meta):]
    lines = meta + [f"NPTS= {record.npts}, DT= {record.dt!r} SEC"]
    for start in range(0, record.npts, VALUES_PER_LINE):
        chunk = record.accel[start:start + VALUES_PER_LINE]
        lines.append("  ".join(f"{v: .6E}" for v in chunk))
    return "\n".join(lines) + "\n"


def write_at2(record: GroundMotionRecord, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(serialize_at2(record))
    return path


def resample(ts: TimeSeries, new_dt: float) -> TimeSeries:
    """Linear interpolation of `ts` onto a grid of step `new_dt` starting at t=0."""
    if not new_dt > 0:
        raise ArgumentError(f"new_dt must be positive, got {new_dt}")
    if new_dt == ts.dt:
        return TimeSeries(ts.dt, ts.values.copy())
    count = int(math.floor(ts.duration / new_dt + 1e-9)) + 1
    new_times = np.arange(count) * new_dt
    return TimeSeries(new_dt, np.interp(new_times, ts.times, ts.values))


def pga(record: GroundMotionRecord) -> float:
    return float(np.max(np.abs(record.accel)))


def write_series_csv(path: str | Path, dt: float, values: np.ndarray) -> Path:
    path = Path(path)
    data = np.column_stack([np.arange(len(values)) * dt, values])
    np.savetxt(path, data, delimiter=",", header="time,value", comments="", fmt="%.10g")
    return path


def write_record_csv(record: GroundMotionRecord, path: str | Path) -> Path:
    return write_series_csv(path, record.dt, record.accel)
