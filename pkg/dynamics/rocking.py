"""Planar rigid-block rocking on a rigid base: no sliding, no bouncing.

The block pivots about one bottom corner at a time. Between impacts the motion
follows

    theta_ddot = -p^2 [ sin(alpha*s - theta) + (ug/g) cos(alpha*s - theta) ]

with s the sign of the active corner. Impacts are located by bisection on the
zero crossing of theta; at each one the angular velocity is multiplied by the
restitution coefficient and the pivot moves to the other corner.
"""

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from core.errors import ArgumentError, IntegrationError, UnsupportedGeometryError
from dynamics.history import ImpactEvent, ResponseHistory
from signals.records import G, GroundMotionRecord

logger = logging.getLogger(__name__)

IMPACT_TOL = 1e-12  # rad
REST_TOL = 1e-8
MIN_RESTITUTION = 1e-3
MAX_BISECTIONS = 200


@dataclass(frozen=True)
class RockingBlock:
    w: float  # half-width, m
    h: float  # half-height, m
    m: float = 1.0
    e: float | None = None
    g: float = G

    def __post_init__(self):
        if not (self.w > 0 and self.h > 0 and self.m > 0):
            raise ArgumentError("block half-dimensions and mass must be positive")
        if self.e is None:
            object.__setattr__(self, "e", restitution_coefficient(self.alpha))
        elif not 0 < self.e <= 1:
            raise ArgumentError(f"restitution must lie in (0, 1], got {self.e}")

    @property
    def alpha(self) -> float:
        return math.atan(self.w / self.h)

    @property
    def R(self) -> float:
        return math.hypot(self.w, self.h)

    @property
    def p(self) -> float:
        return math.sqrt(3.0 * self.g / (4.0 * self.R))

    @property
    def I0(self) -> float:
        return 4.0 * self.m * self.R ** 2 / 3.0

    @property
    def uplift_accel(self) -> float:
        """Ground acceleration (m/s^2) that lifts the block from rest."""
        return self.g * math.tan(self.alpha)

    def energy(self, theta: float, theta_dot: float) -> float:
        return 0.5 * self.I0 * theta_dot ** 2 + self.m * self.g * self.R * (
            math.cos(self.alpha - abs(theta)) - math.cos(self.alpha)
        )


@dataclass(frozen=True)
class RockingState:
    theta: float = 0.0
    theta_dot: float = 0.0
    pivot: int = 0
    overturned: bool = False


class InertiaIdentities(NamedTuple):
    I_pivot: float
    I_translational: float
    I_supplemental: float


def block_constants(full_width: float, full_height: float, m: float = 1.0, e: float | None = None) -> RockingBlock:
    if not (full_width > 0 and full_height > 0):
        raise ArgumentError("block dimensions must be positive")
    return RockingBlock(full_width / 2.0, full_height / 2.0, m, e)


def paper_block(**overrides) -> RockingBlock:
    """4 m x 12 m block."""
    return block_constants(overrides.pop("full_width", 4.0), overrides.pop("full_height", 12.0), **overrides)


def inertia_identities(block: RockingBlock) -> InertiaIdentities:
    mR2 = block.m * block.R ** 2
    return InertiaIdentities(
        I_pivot=4.0 * mR2 / 3.0,
        I_translational=mR2 * (1.0 + math.cos(block.alpha) ** 2 / 3.0),
        I_supplemental=mR2 * math.sin(block.alpha) ** 2 / 3.0,
    )


def restitution_coefficient(alpha: float) -> float:
    """Angular-momentum value e = 1 - 1.5 sin^2(alpha) for a rectangle."""
    if not 0 < alpha < math.pi / 2:
        raise ArgumentError(f"alpha must lie in (0, pi/2), got {alpha}")
    e = 1.0 - 1.5 * math.sin(alpha) ** 2
    if e < MIN_RESTITUTION:
        raise UnsupportedGeometryError(
            f"alpha={alpha:.4f} rad gives restitution {e:.2e}; the impact law needs alpha < asin(sqrt(2/3))"
        )
    return min(e, 1.0)


def rocking_accel(block: RockingBlock, state: RockingState, ug_ddot: float) -> float:
    s = state.pivot if state.theta == 0.0 else (1 if state.theta > 0 else -1)
    return _accel(block.p ** 2, block.alpha, s, state.theta, ug_ddot / block.g)


def _accel(p2: float, alpha: float, s: int, theta: float, ug_g: float) -> float:
    phi = alpha * s - theta
    return -p2 * (math.sin(phi) + ug_g * math.cos(phi))


class _Stepper:
    """RK4 on (theta, theta_dot) with fixed pivot and linearly interpolated ground motion."""

    def __init__(self, block: RockingBlock, ug_g: np.ndarray, record_dt: float):
        self.p2 = block.p ** 2
        self.alpha = block.alpha
        self.ug = ug_g
        self.rdt = record_dt
        self.last = len(ug_g) - 1

    def ground(self, t: float) -> float:
        x = t / self.rdt
        i = int(x)
        if i >= self.last:
            return float(self.ug[self.last])
        frac = x - i
        return float(self.ug[i] + frac * (self.ug[i + 1] - self.ug[i]))

    def rk4(self, t: float, theta: float, omega: float, s: int, h: float) -> tuple[float, float]:
        p2, alpha = self.p2, self.alpha
        g0 = self.ground(t)
        gm = self.ground(t + 0.5 * h)
        g1 = self.ground(t + h)
        k1t, k1w = omega, _accel(p2, alpha, s, theta, g0)
        k2t, k2w = omega + 0.5 * h * k1w, _accel(p2, alpha, s, theta + 0.5 * h * k1t, gm)
        k3t, k3w = omega + 0.5 * h * k2w, _accel(p2, alpha, s, theta + 0.5 * h * k2t, gm)
        k4t, k4w = omega + h * k3w, _accel(p2, alpha, s, theta + h * k3t, g1)
        theta_new = theta + h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
        omega_new = omega + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        return theta_new, omega_new

    def locate_impact(self, t: float, theta: float, omega: float, s: int, h: float) -> tuple[float, float]:
        """Sub-step length to the zero crossing and the angular velocity there."""
        lo, hi = 0.0, h
        tau, w = h, omega
        for _ in range(MAX_BISECTIONS):
            tau = 0.5 * (lo + hi)
            th, w = self.rk4(t, theta, omega, s, tau)
            if abs(th) < IMPACT_TOL or hi - lo < 1e-15:
                break
            if th * s > 0:
                lo = tau
            else:
                hi = tau
        return tau, w


def simulate_rocking(
    block: RockingBlock,
    record: GroundMotionRecord,
    dt: float = 1e-4,
    theta0: float = 0.0,
    theta_dot0: float = 0.0,
) -> ResponseHistory:
    """Rocking response sampled on the record grid.

    Integration runs at record.dt / ceil(record.dt / dt) so that output samples
    coincide with integrator states. `aux` holds `theta_norm` (theta/alpha),
    `pivot` and `overturned`; `events` lists every impact.
    """
    if not 0 < dt <= 1e-3:
        raise ArgumentError(f"rocking step must lie in (0, 1e-3] s, got {dt}")
    substeps = max(1, math.ceil(record.dt / dt - 1e-9))
    h = record.dt / substeps
    stepper = _Stepper(block, record.accel * (G / block.g), record.dt)
    uplift = block.uplift_accel / block.g  # in units of g

    n_out = record.npts
    theta_out = np.zeros(n_out)
    omega_out = np.zeros(n_out)
    accel_out = np.zeros(n_out)
    pivot_out = np.zeros(n_out)
    over_out = np.zeros(n_out)
    events: list[ImpactEvent] = []

    theta, omega = float(theta0), float(theta_dot0)
    pivot = 0 if theta == 0.0 and omega == 0.0 else (1 if (theta > 0 or (theta == 0 and omega > 0)) else -1)
    overturned = False
    e = block.e

    def record_sample(k: int, t: float) -> None:
        theta_out[k], omega_out[k] = theta, omega
        pivot_out[k], over_out[k] = pivot, float(overturned)
        if pivot != 0 and not overturned:
            accel_out[k] = _accel(stepper.p2, stepper.alpha, pivot, theta, stepper.ground(t))

    record_sample(0, 0.0)
    for k in range(1, n_out):
        t_sample = k * record.dt
        for j in range(substeps):
            t = (k - 1) * record.dt + j * h
            if overturned:
                break
            if pivot == 0:
                ground = stepper.ground(t)
                if abs(ground) <= uplift:
                    continue
                pivot = 1 if ground < 0 else -1
            remaining = h
            while remaining > 0.0:
                th_new, w_new = stepper.rk4(t, theta, omega, pivot, remaining)
                if not (math.isfinite(th_new) and math.isfinite(w_new)):
                    raise IntegrationError("non-finite rocking state", t)
                if th_new * pivot >= 0:
                    theta, omega = th_new, w_new
                    break
                tau, w_hit = stepper.locate_impact(t, theta, omega, pivot, remaining)
                w_after = e * w_hit
                events.append(ImpactEvent(t + tau, w_hit, w_after))
                t += tau
                remaining -= tau
                theta, omega = 0.0, w_after
                pivot = -pivot
                if abs(omega) < REST_TOL * block.p:
                    theta, omega, pivot = 0.0, 0.0, 0
                    break
            if abs(theta) >= math.pi / 2:
                overturned = True
                logger.info("block overturned at t=%.4f s under %s", t, record.id)
        record_sample(k, t_sample)

    aux = {
        "theta_norm": theta_out / block.alpha,
        "pivot": pivot_out,
        "overturned": over_out,
    }
    return ResponseHistory(record.dt, theta_out, omega_out, accel_out, ("theta",), aux, tuple(events))


def write_rocking_csv(history: ResponseHistory, path) -> None:
    """`time,theta,theta_norm,theta_dot,overturned`."""
    times = history.times
    data = np.column_stack([
        times, history.disp[:, 0], history.aux["theta_norm"], history.vel[:, 0], history.aux["overturned"],
    ])
    np.savetxt(path, data, delimiter=",", header="time,theta,theta_norm,theta_dot,overturned",
               comments="", fmt="%.10g")
