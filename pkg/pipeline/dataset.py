"""Supervised pairs with the lagged 2n+3 feature layout.

Row t holds [p(t), p(t-1), p(t-2), O(t), O(t-1)] and the target O(t+1), where
p is the normalized ground acceleration and O the n normalized responses.
Lags before the start are zero: both structures start at rest.
"""

from dataclasses import dataclass

import numpy as np

from core.errors import ArgumentError
from dynamics.history import ResponseHistory
from pipeline.normalizer import Normalizer
from signals.records import GroundMotionRecord


@dataclass(frozen=True, eq=False)
class SupervisedSeries:
    dt: float
    inputs: np.ndarray
    targets: np.ndarray
    record_id: str = ""

    def __post_init__(self):
        if len(self.inputs) != len(self.targets):
            raise ArgumentError(f"{len(self.inputs)} input rows but {len(self.targets)} target rows")

    def __len__(self) -> int:
        return len(self.inputs)


def feature_width(n: int) -> int:
    return 2 * n + 3


def lagged(values: np.ndarray, lag: int) -> np.ndarray:
    """values shifted down by `lag` rows, zero-filled at the top."""
    out = np.zeros_like(values)
    if lag < len(values):
        out[lag:] = values[: len(values) - lag]
    return out


def feature_row(ground: np.ndarray, responses: np.ndarray, t: int) -> np.ndarray:
    """Features at step t from a normalized ground series and a response array (rows = steps)."""
    p = [ground[t - k] if t - k >= 0 else 0.0 for k in range(3)]
    previous = responses[t - 1] if t >= 1 else np.zeros(responses.shape[1])
    return np.concatenate([p, responses[t], previous])


def build_dataset(
    history: ResponseHistory, record: GroundMotionRecord, n: int, normalizer: Normalizer
) -> SupervisedSeries:
    if abs(history.dt - record.dt) > 1e-12 * record.dt or history.steps != record.npts:
        raise ArgumentError(
            f"history ({history.steps} steps at dt={history.dt}) and record {record.id} "
            f"({record.npts} steps at dt={record.dt}) are not aligned; resample first"
        )
    if history.ndof != n:
        raise ArgumentError(f"history has {history.ndof} DOFs, expected {n}")
    if history.steps < 2:
        raise ArgumentError("need at least two steps to form a supervised pair")
    p = normalizer.ground(record.accel)
    O = normalizer.response(history.disp)
    inputs = np.column_stack([p, lagged(p, 1), lagged(p, 2), O, lagged(O, 1)])[:-1]
    return SupervisedSeries(record.dt, inputs, O[1:].copy(), record.id)
