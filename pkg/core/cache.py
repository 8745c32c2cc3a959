"""On-disk cache of oracle response histories."""

import hashlib
import logging
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Callable, Optional

import numpy as np
import yaml

from dynamics.history import ImpactEvent, ResponseHistory
from signals.records import GroundMotionRecord

logger = logging.getLogger(__name__)


@dataclass
class CacheStats:
    hits: int = 0
    misses: int = 0
    last_updated: Optional[datetime] = None

    @property
    def total(self) -> int:
        return self.hits + self.misses


def history_key(params: dict, record: GroundMotionRecord) -> str:
    """Hash of the simulator parameters and the record content."""
    digest = hashlib.sha256()
    digest.update(yaml.safe_dump(params, sort_keys=True).encode())
    digest.update(repr(float(record.dt)).encode())
    digest.update(np.ascontiguousarray(record.accel, dtype=float).tobytes())
    return digest.hexdigest()[:24]


def _save(path: Path, history: ResponseHistory) -> None:
    events = np.array([[e.time, e.theta_dot_before, e.theta_dot_after] for e in history.events]).reshape(-1, 3)
    arrays = {f"aux_{k}": v for k, v in history.aux.items()}
    np.savez(path, dt=history.dt, disp=history.disp, vel=history.vel, acc=history.acc,
             labels=np.array(history.labels), events=events, **arrays)


def _load(path: Path) -> ResponseHistory:
    with np.load(path) as data:
        aux = {k[4:]: data[k] for k in data.files if k.startswith("aux_")}
        events = tuple(ImpactEvent(*map(float, row)) for row in data["events"])
        return ResponseHistory(float(data["dt"]), data["disp"], data["vel"], data["acc"],
                               tuple(str(s) for s in data["labels"]), aux, events)


class HistoryCache:
    """Manages cached oracle histories under `<root>` as .npz files."""

    def __init__(self, root: Path | None, enabled: bool = True):
        self.root = Path(root) if root else None
        self.enabled = enabled and self.root is not None
        self.stats = CacheStats()

    def _path(self, params: dict, record: GroundMotionRecord) -> Path:
        return self.root / f"{history_key(params, record)}.npz"

    def lookup(self, params: dict, record: GroundMotionRecord) -> ResponseHistory | None:
        """Cached history or None; counts a hit or a miss."""
        self.stats.last_updated = datetime.now()
        if self.enabled:
            path = self._path(params, record)
            if path.is_file():
                try:
                    history = _load(path)
                    self.stats.hits += 1
                    return history
                except (OSError, ValueError, KeyError) as exc:
                    logger.warning("discarding unreadable cache entry %s: %s", path.name, exc)
        self.stats.misses += 1
        return None

    def store(self, params: dict, record: GroundMotionRecord, history: ResponseHistory) -> None:
        if self.enabled:
            self.root.mkdir(parents=True, exist_ok=True)
            _save(self._path(params, record), history)

    def get_or_compute(
        self, params: dict, record: GroundMotionRecord, compute: Callable[[GroundMotionRecord], ResponseHistory]
    ) -> ResponseHistory:
        history = self.lookup(params, record)
        if history is None:
            history = compute(record)
            self.store(params, record, history)
        return history

    def clear(self) -> None:
        """Remove every cached history and reset statistics."""
        if self.root and self.root.is_dir():
            for entry in self.root.glob("*.npz"):
                entry.unlink()
        self.stats = CacheStats()
