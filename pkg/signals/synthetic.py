"""Deterministic synthetic ground motions.

A record is a sum of sinusoids with seeded frequencies, amplitudes and phases,
shaped by a rise / plateau / exponential-decay envelope. Used in place of the
PEER records, which are not redistributed.
"""

import numpy as np

from signals.records import GroundMotionRecord


def envelope(t: np.ndarray, rise: float, plateau: float, decay: float) -> np.ndarray:
    env = np.ones_like(t)
    env = np.where(t < rise, (t / rise) ** 2, env)
    tail = t > rise + plateau
    env = np.where(tail, np.exp(-decay * (t - rise - plateau)), env)
    return env


def synthetic_record(
    seed: int,
    duration: float = 20.0,
    dt: float = 0.01,
    components: int = 24,
    band: tuple[float, float] = (0.3, 12.0),
    peak: float = 0.3,
    record_id: str | None = None,
) -> GroundMotionRecord:
    """Broadband record with peak |accel| equal to `peak` (g)."""
    rng = np.random.default_rng(seed)
    t = np.arange(int(round(duration / dt)) + 1) * dt
    freqs = np.exp(rng.uniform(np.log(band[0]), np.log(band[1]), components))
    amps = rng.uniform(0.3, 1.0, components) / np.sqrt(freqs)
    phases = rng.uniform(0.0, 2 * np.pi, components)
    signal = np.sum(amps[:, None] * np.sin(2 * np.pi * freqs[:, None] * t[None, :] + phases[:, None]), axis=0)
    shaped = signal * envelope(t, rise=0.15 * duration, plateau=0.35 * duration, decay=6.0 / duration)
    shaped[0] = 0.0
    shaped *= peak / np.max(np.abs(shaped))
    meta = (f"SYNTHETIC {seed}", "SUM OF ENVELOPED SINUSOIDS", "ACCELERATION IN G")
    return GroundMotionRecord(record_id or f"SYN{seed:03d}", dt, shaped, meta)


def sine_record(
    amplitude: float, period: float, cycles: float, dt: float = 0.001, record_id: str = "SINE"
) -> GroundMotionRecord:
    t = np.arange(int(round(cycles * period / dt)) + 1) * dt
    return GroundMotionRecord(record_id, dt, amplitude * np.sin(2 * np.pi * t / period))


def synthetic_suite(count: int, seed: int = 0, duration: float = 20.0, dt: float = 0.01) -> list[GroundMotionRecord]:
    return [synthetic_record(seed + i, duration=duration, dt=dt) for i in range(count)]
