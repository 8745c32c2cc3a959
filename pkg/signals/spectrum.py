"""Elastic response spectra and amplitude scaling of records."""

import logging
import math
from typing import Sequence

import numpy as np

from core.errors import ArgumentError, DegenerateInputError
from dynamics.hht import integrate_linear_sdof
from signals.records import GroundMotionRecord, pga

logger = logging.getLogger(__name__)

DEFAULT_DAMPING = 0.05
SUBSTEPS_PER_PERIOD = 20


def elastic_sa(record: GroundMotionRecord, T: float, zeta: float = DEFAULT_DAMPING) -> float:
    """Pseudo-spectral acceleration (g) of a linear oscillator of period T.

    Integrated with the dissipation-free HHT rule at min(dt, T/20) on the
    linearly interpolated record.
    """
    if not T > 0:
        raise ArgumentError(f"period must be positive, got {T}")
    if not 0 <= zeta < 1:
        raise ArgumentError(f"damping ratio must lie in [0, 1), got {zeta}")
    h = min(record.dt, T / SUBSTEPS_PER_PERIOD)
    ground = record.resampled(h).accel if h != record.dt else record.accel
    omega = 2.0 * math.pi / T
    # unit mass, load in g: displacement comes out in g*s^2
    disp = integrate_linear_sdof(omega, zeta, -ground, h)
    return float(omega * omega * np.max(np.abs(disp)))


def response_spectrum(
    record: GroundMotionRecord, periods: Sequence[float], zeta: float = DEFAULT_DAMPING
) -> np.ndarray:
    return np.array([elastic_sa(record, T, zeta) for T in periods])


def scale_to_sa(
    record: GroundMotionRecord, T: float, zeta: float, target: float
) -> tuple[GroundMotionRecord, float]:
    sa = elastic_sa(record, T, zeta)
    if sa <= 0:
        raise DegenerateInputError(f"record {record.id} has zero spectral response at T={T} s")
    factor = target / sa
    logger.debug("record %s: Sa(%.3f s)=%.4g g, scale factor %.4g", record.id, T, sa, factor)
    return record.scaled(factor), factor


def scale_to_pga(record: GroundMotionRecord, target: float) -> tuple[GroundMotionRecord, float]:
    peak = pga(record)
    if peak <= 0:
        raise DegenerateInputError(f"record {record.id} is identically zero")
    factor = target / peak
    return record.scaled(factor), factor


def default_periods(count: int = 60, t_min: float = 0.05, t_max: float = 4.0) -> np.ndarray:
    return np.geomspace(t_min, t_max, count)


def write_spectrum_csv(path, periods: Sequence[float], sa: Sequence[float]) -> None:
    np.savetxt(path, np.column_stack([periods, sa]), delimiter=",", header="period,Sa",
               comments="", fmt="%.10g")
