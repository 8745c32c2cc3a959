"""Error measures shared by training control and evaluation."""

import numpy as np

from core.errors import ArgumentError, DegenerateInputError


def _as_2d(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    return arr[:, None] if arr.ndim == 1 else arr


def error_rates(pred, truth) -> np.ndarray:
    """Per column: 100 * mean|pred - truth| / max|truth| (percent)."""
    pred, truth = _as_2d(pred), _as_2d(truth)
    if pred.shape != truth.shape:
        raise ArgumentError(f"prediction {pred.shape} and truth {truth.shape} are not aligned")
    peak = np.max(np.abs(truth), axis=0)
    if np.any(peak == 0):
        raise DegenerateInputError("ground truth is identically zero for at least one DOF")
    return 100.0 * np.mean(np.abs(pred - truth), axis=0) / peak


def peak_errors(pred, truth) -> np.ndarray:
    """Per column: 100 * |max|pred| - max|truth|| / max|truth| (percent)."""
    pred, truth = _as_2d(pred), _as_2d(truth)
    peak = np.max(np.abs(truth), axis=0)
    if np.any(peak == 0):
        raise DegenerateInputError("ground truth is identically zero for at least one DOF")
    return 100.0 * np.abs(np.max(np.abs(pred), axis=0) - peak) / peak
