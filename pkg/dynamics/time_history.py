"""Nonlinear time-history analysis of the shear frame under a ground-motion record."""

import logging

import numpy as np

from core.errors import ArgumentError
from dynamics.frame import ShearFrame
from dynamics.hht import FrameState, IntegratorConfig, effective_load, step_with_retries
from dynamics.history import ResponseHistory
from signals.records import GroundMotionRecord

logger = logging.getLogger(__name__)

ENERGY_CHANNELS = ("energy_kinetic", "energy_strain", "energy_damped", "energy_hysteretic", "energy_input")


def simulate_frame(
    frame: ShearFrame,
    record: GroundMotionRecord,
    cfg: IntegratorConfig | None = None,
) -> ResponseHistory:
    """Floor displacements relative to the ground on the cfg.dt grid.

    The record is linearly interpolated onto the integration grid, which may
    refine the record step but never coarsen it. Besides
    displacement, velocity and acceleration the history carries per-story
    drift and shear (`drift1`, `shear1`, ...) and running energy terms.
    """
    cfg = cfg or IntegratorConfig()
    if cfg.dt > record.dt * (1.0 + 1e-9):
        raise ArgumentError(
            f"integrator dt {cfg.dt} is coarser than the record step {record.dt} of {record.id}; "
            "lower integrator.dt to at most the record step"
        )
    ground = record.resampled(cfg.dt) if cfg.dt != record.dt else record
    ug = ground.accel
    steps = len(ug)
    n = frame.n

    disp = np.zeros((steps, n))
    vel = np.zeros((steps, n))
    acc = np.zeros((steps, n))
    drift = np.zeros((steps, n))
    shear = np.zeros((steps, n))
    energy = {name: np.zeros(steps) for name in ENERGY_CHANNELS}

    M, C = frame.mass_matrix, frame.damping_matrix
    k0 = np.array([s.k0 for s in frame.springs])

    state = FrameState.at_rest(frame, float(ug[0]))
    acc[0] = state.a
    work_restoring = work_damped = work_input = 0.0
    for i in range(1, steps):
        previous = state
        state = step_with_retries(previous, float(ug[i]), frame, cfg)
        disp[i], vel[i], acc[i] = state.u, state.v, state.a
        drift[i] = np.diff(state.u, prepend=0.0)
        shear[i] = state.shears

        du = state.u - previous.u
        v_mid = 0.5 * (state.v + previous.v)
        p_mid = 0.5 * (effective_load(frame, previous.ug) + effective_load(frame, state.ug))
        work_restoring += float(du @ (0.5 * (state.forces + previous.forces)))
        work_damped += float(du @ (C @ v_mid))
        work_input += float(du @ p_mid)

        strain = float(np.sum(state.shears ** 2 / (2.0 * k0)))
        energy["energy_kinetic"][i] = 0.5 * float(state.v @ M @ state.v)
        energy["energy_strain"][i] = strain
        energy["energy_damped"][i] = work_damped
        energy["energy_hysteretic"][i] = work_restoring - strain
        energy["energy_input"][i] = work_input

    aux = {f"drift{j + 1}": drift[:, j] for j in range(n)}
    aux.update({f"shear{j + 1}": shear[:, j] for j in range(n)})
    aux.update(energy)
    logger.debug("frame run %s: %d steps, peak drift %.4g in", record.id, steps, float(np.max(np.abs(drift))))
    return ResponseHistory(cfg.dt, disp, vel, acc, tuple(f"floor{j + 1}" for j in range(n)), aux)


def energy_balance_error(history: ResponseHistory, floor: float = 1e-12) -> np.ndarray:
    """Per-step |Ek + Es + Ed + Eh - Ein| / max(Ein, floor)."""
    aux = history.aux
    lhs = aux["energy_kinetic"] + aux["energy_strain"] + aux["energy_damped"] + aux["energy_hysteretic"]
    scale = np.maximum(np.abs(aux["energy_input"]), floor)
    return np.abs(lhs - aux["energy_input"]) / scale


def peak_drift_ratio(history: ResponseHistory, story_height: float) -> float:
    drifts = np.column_stack([history.aux[f"drift{j + 1}"] for j in range(history.ndof)])
    return float(np.max(np.abs(drifts)) / story_height)


def write_spring_trace(history: ResponseHistory, path) -> None:
    """Story drift and shear per step, for force-displacement loop plots."""
    channels = [f"drift{j + 1}" for j in range(history.ndof)] + [f"shear{j + 1}" for j in range(history.ndof)]
    history.to_csv(path, channels=channels)
