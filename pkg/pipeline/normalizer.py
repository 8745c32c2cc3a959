"""Scale factors between physical units and network units."""

from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
import yaml

from core.errors import ArgumentError, DegenerateInputError
from dynamics.history import ResponseHistory
from signals.records import GroundMotionRecord


@dataclass(frozen=True)
class Normalizer:
    ground_scale: float  # g
    response_scale: float  # story height (in) or alpha (rad)

    def __post_init__(self):
        for name in ("ground_scale", "response_scale"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise DegenerateInputError(f"normalizer {name} must be positive, got {value}")

    def ground(self, accel: np.ndarray) -> np.ndarray:
        return np.asarray(accel, dtype=float) / self.ground_scale

    def ground_inverse(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values, dtype=float) * self.ground_scale

    def response(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values, dtype=float) / self.response_scale

    def response_inverse(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values, dtype=float) * self.response_scale

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(yaml.safe_dump({k: float(v) for k, v in asdict(self).items()}, sort_keys=True))
        return path

    @classmethod
    def load(cls, path: str | Path) -> "Normalizer":
        data = yaml.safe_load(Path(path).read_text()) or {}
        try:
            return cls(float(data["ground_scale"]), float(data["response_scale"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ArgumentError(f"malformed normalizer file {path}: {exc}") from exc


def fit_normalizer(
    histories: Sequence[ResponseHistory],
    records: Sequence[GroundMotionRecord],
    response_scale: float,
) -> Normalizer:
    """Ground scale = max |accel| over the training records; responses use the physical scale."""
    if not records or len(histories) != len(records):
        raise ArgumentError("normalizer needs one history per training record and at least one record")
    ground_scale = max(float(np.max(np.abs(r.accel))) for r in records)
    if ground_scale == 0:
        raise DegenerateInputError("training records are identically zero")
    return Normalizer(ground_scale, float(response_scale))
