"""Hilber-Hughes-Taylor time stepping.

The dissipation parameter follows the convention where alpha = 1.0 is the
average-acceleration Newmark rule and smaller values (down to 2/3) damp high
frequencies: the classical parameter is alpha_H = alpha - 1, with
beta = (2 - alpha)^2 / 4 and gamma = 3/2 - alpha. Equilibrium is enforced as

    M a1 + alpha (C v1 + F(u1)) + (1 - alpha)(C v0 + F0) = alpha p1 + (1 - alpha) p0
"""

import logging
from dataclasses import dataclass, replace

import numpy as np

from core.errors import ArgumentError, StepFailureError
from dynamics.frame import ShearFrame
from dynamics.hysteresis import HystereticSpring
from signals.records import G_IN

logger = logging.getLogger(__name__)

INITIAL_STIFFNESS_AFTER = 10


@dataclass(frozen=True)
class IntegratorConfig:
    alpha: float = 1.0
    dt: float = 0.005
    newton_tol: float = 1e-6
    newton_max_iter: int = 50
    max_halvings: int = 4

    def __post_init__(self):
        if not 2.0 / 3.0 - 1e-12 <= self.alpha <= 1.0:
            raise ArgumentError(f"HHT alpha must lie in [2/3, 1], got {self.alpha}")
        if not self.dt > 0:
            raise ArgumentError(f"integrator dt must be positive, got {self.dt}")
        if not self.newton_tol > 0:
            raise ArgumentError(f"Newton tolerance must be positive, got {self.newton_tol}")
        if self.newton_max_iter < 1:
            raise ArgumentError("newton_max_iter must be at least 1")

    @property
    def beta(self) -> float:
        return (2.0 - self.alpha) ** 2 / 4.0

    @property
    def gamma(self) -> float:
        return 1.5 - self.alpha


@dataclass(frozen=True, eq=False)
class FrameState:
    """Committed kinematics of every floor plus the committed story springs."""

    u: np.ndarray
    v: np.ndarray
    a: np.ndarray
    ug: float  # ground acceleration (g) at this instant
    forces: np.ndarray  # floor restoring forces
    shears: np.ndarray  # story shears
    springs: tuple[HystereticSpring, ...]
    time: float = 0.0

    @classmethod
    def at_rest(cls, frame: ShearFrame, ug: float = 0.0) -> "FrameState":
        return cls.initial(frame, np.zeros(frame.n), np.zeros(frame.n), ug)

    @classmethod
    def initial(cls, frame: ShearFrame, u0: np.ndarray, v0: np.ndarray, ug: float = 0.0) -> "FrameState":
        """State at t=0 whose acceleration satisfies equilibrium."""
        u0 = np.asarray(u0, dtype=float)
        v0 = np.asarray(v0, dtype=float)
        forces, _, springs, shears = frame.restoring_force([s.reset() for s in frame.springs], u0)
        load = effective_load(frame, ug)
        a0 = np.linalg.solve(frame.mass_matrix, load - frame.damping_matrix @ v0 - forces)
        return cls(u0, v0, a0, ug, forces, shears, springs)


def effective_load(frame: ShearFrame, ug: float) -> np.ndarray:
    """-M iota ug with ug in g converted to in/s^2."""
    return -np.asarray(frame.masses) * ug * G_IN


def hht_step(
    state: FrameState,
    ug_next: float,
    frame: ShearFrame,
    cfg: IntegratorConfig,
    dt: float | None = None,
) -> FrameState:
    """Advance one step of size dt (default cfg.dt) to ground acceleration ug_next."""
    h = cfg.dt if dt is None else dt
    alpha, beta, gamma = cfg.alpha, cfg.beta, cfg.gamma
    M, C = frame.mass_matrix, frame.damping_matrix

    c0 = 1.0 / (beta * h * h)
    c1 = gamma / (beta * h)
    # a1 = c0 u1 - A ; v1 = c1 u1 - V
    A = c0 * state.u + state.v / (beta * h) + (0.5 / beta - 1.0) * state.a
    V = c1 * state.u - (1.0 - gamma / beta) * state.v - h * (1.0 - 0.5 * gamma / beta) * state.a

    p0 = effective_load(frame, state.ug)
    p1 = effective_load(frame, ug_next)
    known = (
        alpha * p1 + (1.0 - alpha) * (p0 - C @ state.v - state.forces)
        + M @ A + alpha * C @ V
    )
    linear = c0 * M + alpha * c1 * C

    u = state.u.copy()
    trace: list[float] = []
    K0 = frame.initial_stiffness
    for iteration in range(cfg.newton_max_iter):
        forces, tangent, springs, shears = frame.restoring_force(state.springs, u)
        residual = known - linear @ u - alpha * forces
        norm = float(np.max(np.abs(residual)))
        trace.append(norm)
        if not np.isfinite(norm):
            break
        # the predictor is never accepted unless it is exact
        if (norm <= cfg.newton_tol and iteration > 0) or norm == 0.0:
            return FrameState(
                u=u, v=c1 * u - V, a=c0 * u - A, ug=ug_next, forces=forces, shears=shears,
                springs=springs, time=state.time + h,
            )
        stiffness = K0 if iteration >= INITIAL_STIFFNESS_AFTER else tangent
        u = u + np.linalg.solve(linear + alpha * stiffness, residual)
    logger.debug("Newton trace at t=%.5f: %s", state.time + h, trace)
    raise StepFailureError(state.time + h, trace)


def step_with_retries(
    state: FrameState,
    ug_next: float,
    frame: ShearFrame,
    cfg: IntegratorConfig,
    dt: float | None = None,
    depth: int = 0,
) -> FrameState:
    """hht_step that halves the step (interpolating the load) on Newton failure."""
    h = cfg.dt if dt is None else dt
    try:
        return hht_step(state, ug_next, frame, cfg, h)
    except StepFailureError:
        if depth >= cfg.max_halvings:
            raise
        logger.debug("halving step at t=%.5f (depth %d)", state.time, depth + 1)
        ug_mid = 0.5 * (state.ug + ug_next)
        half = step_with_retries(state, ug_mid, frame, cfg, h / 2, depth + 1)
        return step_with_retries(half, ug_next, frame, cfg, h / 2, depth + 1)


def integrate_linear_sdof(
    omega: float,
    zeta: float,
    load: np.ndarray,
    dt: float,
    alpha: float = 1.0,
) -> np.ndarray:
    """Unit-mass linear oscillator under `load` sampled at dt; returns displacements.

    Same HHT recurrence as hht_step, specialised to a scalar linear system.
    """
    cfg = replace(IntegratorConfig(), alpha=alpha, dt=dt)
    beta, gamma = cfg.beta, cfg.gamma
    k = omega * omega
    c = 2.0 * zeta * omega
    c0 = 1.0 / (beta * dt * dt)
    c1 = gamma / (beta * dt)
    k_eff = c0 + alpha * c1 * c + alpha * k
    ca = 0.5 / beta - 1.0
    cv = 1.0 - gamma / beta
    cva = dt * (1.0 - 0.5 * gamma / beta)

    load = np.asarray(load, dtype=float)
    disp = np.zeros(len(load))
    u = v = 0.0
    a = float(load[0])
    p_prev = a
    for i in range(1, len(load)):
        p = float(load[i])
        A = c0 * u + v / (beta * dt) + ca * a
        V = c1 * u - cv * v - cva * a
        rhs = alpha * p + (1.0 - alpha) * (p_prev - c * v - k * u) + A + alpha * c * V
        u = rhs / k_eff
        v = c1 * u - V
        a = c0 * u - A
        disp[i] = u
        p_prev = p
    return disp
