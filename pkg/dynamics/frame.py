"""Lumped-mass shear building: assembly, modal analysis, stiffness calibration, Rayleigh damping."""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy import linalg

from core.errors import ArgumentError, CalibrationError, ModelError
from dynamics.hysteresis import HystereticSpring, spring_response

logger = logging.getLogger(__name__)

PAPER_MASSES = (0.3, 0.3, 0.18)  # kip*s^2/in
PAPER_PERIODS = (0.550, 0.188, 0.120)  # s
PAPER_STORY_HEIGHT = 118.0  # in


@dataclass(frozen=True)
class RayleighSpec:
    zeta: float = 0.025
    mode_i: int = 1
    mode_j: int = 3


@dataclass(frozen=True)
class ModalResult:
    periods: np.ndarray  # descending
    frequencies: np.ndarray  # rad/s, ascending with mode number
    shapes: np.ndarray  # columns are mass-normalized mode vectors


@dataclass(frozen=True, eq=False)
class ShearFrame:
    masses: tuple[float, ...]
    springs: tuple[HystereticSpring, ...]
    story_height: float = PAPER_STORY_HEIGHT
    rayleigh: RayleighSpec = field(default_factory=RayleighSpec)

    def __post_init__(self):
        object.__setattr__(self, "masses", tuple(float(m) for m in self.masses))
        object.__setattr__(self, "springs", tuple(self.springs))
        if any(not m > 0 for m in self.masses):
            raise ArgumentError("floor masses must be positive")
        if len(self.springs) != len(self.masses):
            raise ArgumentError(
                f"{len(self.masses)} floor masses but {len(self.springs)} story springs"
            )
        if not self.story_height > 0:
            raise ArgumentError("story height must be positive")

    @property
    def n(self) -> int:
        return len(self.masses)

    @cached_property
    def mass_matrix(self) -> np.ndarray:
        return np.diag(self.masses)

    @cached_property
    def initial_stiffness(self) -> np.ndarray:
        return assemble_stiffness([s.k0 for s in self.springs])

    @cached_property
    def modal(self) -> "ModalResult":
        return modal_analysis(self)

    @cached_property
    def rayleigh_coefficients(self) -> tuple[float, float]:
        omega = self.modal.frequencies
        i = min(self.rayleigh.mode_i, self.n) - 1
        j = min(self.rayleigh.mode_j, self.n) - 1
        return rayleigh_coefficients(omega[i], omega[j], self.rayleigh.zeta)

    @cached_property
    def damping_matrix(self) -> np.ndarray:
        a0, a1 = self.rayleigh_coefficients
        return a0 * self.mass_matrix + a1 * self.initial_stiffness

    def restoring_force(
        self, springs: Sequence[HystereticSpring], u: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray, tuple[HystereticSpring, ...], np.ndarray]:
        """Floor restoring forces, tangent stiffness, trial springs and story shears at floor displacements u."""
        drifts = np.diff(u, prepend=0.0)
        shears = np.empty(self.n)
        tangents = np.empty(self.n)
        trial = []
        for i, (spring, drift) in enumerate(zip(springs, drifts)):
            shears[i], tangents[i], updated = spring_response(spring, float(drift))
            trial.append(updated)
        forces = shears - np.append(shears[1:], 0.0)
        return forces, assemble_stiffness(tangents), tuple(trial), shears


def assemble_stiffness(story_k: Sequence[float]) -> np.ndarray:
    """Tridiagonal shear-building stiffness from story stiffnesses, base pinned."""
    k = np.asarray(story_k, dtype=float)
    n = len(k)
    K = np.zeros((n, n))
    for i in range(n):
        K[i, i] = k[i] + (k[i + 1] if i + 1 < n else 0.0)
        if i + 1 < n:
            K[i, i + 1] = K[i + 1, i] = -k[i + 1]
    return K


def modal_analysis(frame: ShearFrame) -> ModalResult:
    """Solve K phi = omega^2 M phi with the elastic story stiffnesses."""
    return _modal(frame.mass_matrix, frame.initial_stiffness)


def _modal(M: np.ndarray, K: np.ndarray) -> ModalResult:
    try:
        eigvals, shapes = linalg.eigh(K, M)
    except linalg.LinAlgError as exc:
        raise ModelError(f"generalized eigenproblem failed: {exc}") from exc
    if np.any(eigvals <= 0):
        raise ModelError("stiffness matrix is not positive definite")
    # deterministic sign: top floor positive
    signs = np.where(shapes[-1, :] < 0, -1.0, 1.0)
    shapes = shapes * signs
    omega = np.sqrt(eigvals)
    return ModalResult(periods=2 * np.pi / omega, frequencies=omega, shapes=shapes)


def periods_for(masses: Sequence[float], story_k: Sequence[float]) -> np.ndarray:
    return _modal(np.diag(masses), assemble_stiffness(story_k)).periods


def calibrate_stiffness(
    masses: Sequence[float],
    target_periods: Sequence[float],
    tol: float = 1e-6,
    max_iter: int = 200,
) -> tuple[float, ...]:
    """Story stiffnesses whose elastic periods match `target_periods`.

    Damped Newton on log T(log k) with a forward-difference Jacobian, started
    from the uniform stiffness that gives T1 for the total mass as an SDOF.
    """
    masses = np.asarray(masses, dtype=float)
    targets = np.asarray(target_periods, dtype=float)
    if len(targets) != len(masses):
        raise ArgumentError(f"{len(masses)} masses but {len(targets)} target periods")
    if np.any(targets <= 0) or np.any(np.diff(targets) >= 0):
        raise ArgumentError(f"target periods must be positive and strictly descending, got {targets}")
    if np.any(masses <= 0):
        raise ArgumentError("floor masses must be positive")

    def residual(x: np.ndarray) -> np.ndarray:
        return np.log(periods_for(masses, np.exp(x))) - np.log(targets)

    x = np.full(len(masses), math.log(masses.sum() * (2 * math.pi / targets[0]) ** 2))
    r = residual(x)
    for iteration in range(max_iter):
        norm = float(np.max(np.abs(r)))
        if norm < tol:
            logger.debug("stiffness calibration converged in %d iterations", iteration)
            return tuple(float(v) for v in np.exp(x))
        h = 1e-7
        J = np.empty((len(x), len(x)))
        for j in range(len(x)):
            xp = x.copy()
            xp[j] += h
            J[:, j] = (residual(xp) - r) / h
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            step = -np.linalg.lstsq(J, r, rcond=None)[0]
        damping = 1.0
        while damping > 1e-4:
            candidate = x + damping * step
            r_new = residual(candidate)
            if np.max(np.abs(r_new)) < norm:
                break
            damping *= 0.5
        x, r = candidate, r_new
    raise CalibrationError("stiffness calibration did not converge", float(np.max(np.abs(r))))


def rayleigh_coefficients(omega_i: float, omega_j: float, zeta: float) -> tuple[float, float]:
    """Mass and stiffness proportional factors (a0, a1) giving ratio zeta at omega_i and omega_j."""
    if not 0 < omega_i <= omega_j:
        raise ArgumentError(f"need 0 < omega_i <= omega_j, got {omega_i}, {omega_j}")
    if zeta < 0:
        raise ArgumentError(f"damping ratio must be non-negative, got {zeta}")
    a0 = 2 * zeta * omega_i * omega_j / (omega_i + omega_j)
    a1 = 2 * zeta / (omega_i + omega_j)
    return a0, a1


def modal_damping(a0: float, a1: float, omega: float) -> float:
    return 0.5 * (a0 / omega + a1 * omega)


def build_frame(
    masses: Sequence[float],
    story_k: Sequence[float],
    story_height: float = PAPER_STORY_HEIGHT,
    yield_drift_ratio: float = 0.005,
    damping_ratio: float = 0.025,
    b: float = 0.03,
    r0: float = 18.0,
    cr1: float = 0.925,
    cr2: float = 0.15,
) -> ShearFrame:
    """Frame whose story springs all yield at the same drift ratio."""
    uy = yield_drift_ratio * story_height
    springs = tuple(
        HystereticSpring(k0=k, Fy=k * uy, b=b, r0=r0, cr1=cr1, cr2=cr2) for k in story_k
    )
    return ShearFrame(masses, springs, story_height, RayleighSpec(zeta=damping_ratio))


def paper_frame(**overrides) -> ShearFrame:
    """Three-story frame calibrated to 0.550/0.188/0.120 s."""
    masses = overrides.pop("masses", PAPER_MASSES)
    periods = overrides.pop("target_periods", PAPER_PERIODS)
    story_k = calibrate_stiffness(masses, periods)
    logger.info("calibrated story stiffness: %s kip/in", ", ".join(f"{k:.2f}" for k in story_k))
    return build_frame(masses, story_k, **overrides)
