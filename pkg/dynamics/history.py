"""Time-aligned response trajectories shared by the oracles and the network rollout."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from core.errors import ArgumentError


def _frozen2d(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ImpactEvent:
    time: float
    theta_dot_before: float
    theta_dot_after: float


@dataclass(frozen=True, eq=False)
class ResponseHistory:
    """Rows are time steps, columns are degrees of freedom.

    `aux` carries extra per-step channels (story drift and shear, energy terms,
    normalized rotation, ...) and `events` the discrete impacts of a rocking run.
    """

    dt: float
    disp: np.ndarray
    vel: np.ndarray
    acc: np.ndarray
    labels: tuple[str, ...]
    aux: Mapping[str, np.ndarray] = field(default_factory=dict)
    events: tuple[ImpactEvent, ...] = ()

    def __post_init__(self):
        for name in ("disp", "vel", "acc"):
            object.__setattr__(self, name, _frozen2d(getattr(self, name)))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "events", tuple(self.events))
        object.__setattr__(self, "aux", {k: np.asarray(v, dtype=float) for k, v in self.aux.items()})
        if not self.dt > 0:
            raise ArgumentError(f"history dt must be positive, got {self.dt}")
        if not (self.disp.shape == self.vel.shape == self.acc.shape):
            raise ArgumentError("displacement, velocity and acceleration series differ in shape")
        if self.disp.shape[1] != len(self.labels):
            raise ArgumentError(f"{self.disp.shape[1]} DOF columns but {len(self.labels)} labels")
        for name, series in self.aux.items():
            if len(series) != len(self.disp):
                raise ArgumentError(f"aux channel {name!r} has {len(series)} rows, expected {len(self.disp)}")
        if not (np.all(np.isfinite(self.disp)) and np.all(np.isfinite(self.vel)) and np.all(np.isfinite(self.acc))):
            raise ArgumentError("history contains non-finite values")

    @property
    def steps(self) -> int:
        return len(self.disp)

    @property
    def ndof(self) -> int:
        return self.disp.shape[1]

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.steps) * self.dt

    def truncated(self, steps: int) -> "ResponseHistory":
        return ResponseHistory(
            self.dt, self.disp[:steps], self.vel[:steps], self.acc[:steps], self.labels,
            {k: v[:steps] for k, v in self.aux.items()},
            tuple(e for e in self.events if e.time <= (steps - 1) * self.dt),
        )

    def resampled(self, new_dt: float) -> "ResponseHistory":
        """Linear interpolation onto a grid of step new_dt (exact subsampling for integer ratios)."""
        if not new_dt > 0:
            raise ArgumentError(f"new_dt must be positive, got {new_dt}")
        if new_dt == self.dt:
            return self
        duration = (self.steps - 1) * self.dt
        count = int(np.floor(duration / new_dt + 1e-9)) + 1
        ratio = new_dt / self.dt
        exact = abs(ratio - round(ratio)) < 1e-9
        index = np.arange(count) * int(round(ratio))
        old_t, new_t = self.times, np.arange(count) * new_dt

        def pick(arr: np.ndarray) -> np.ndarray:
            if exact:
                return arr[index]
            if arr.ndim == 1:
                return np.interp(new_t, old_t, arr)
            return np.column_stack([np.interp(new_t, old_t, arr[:, j]) for j in range(arr.shape[1])])
        return ResponseHistory(
            new_dt, pick(self.disp), pick(self.vel), pick(self.acc), self.labels,
            {k: pick(v) for k, v in self.aux.items()}, self.events,
        )

    def to_csv(self, path: str | Path, channels: Sequence[str] = ("disp", "vel", "acc")) -> Path:
        """Write `time,disp1..,vel1..,acc1..` with any requested aux channels appended."""
        path = Path(path)
        columns = [self.times]
        header = ["time"]
        for kind in channels:
            if kind in ("disp", "vel", "acc"):
                block = getattr(self, kind)
                columns.extend(block[:, j] for j in range(self.ndof))
                header.extend(f"{kind}{j + 1}" for j in range(self.ndof))
            else:
                columns.append(self.aux[kind])
                header.append(kind)
        np.savetxt(path, np.column_stack(columns), delimiter=",", header=",".join(header),
                   comments="", fmt="%.10g")
        return path


def from_displacements(dt: float, disp: np.ndarray, labels: Sequence[str]) -> ResponseHistory:
    """History whose velocity and acceleration are finite differences of `disp`."""
    disp = np.asarray(disp, dtype=float)
    if disp.ndim == 1:
        disp = disp[:, None]
    if len(disp) < 2:
        vel = np.zeros_like(disp)
        acc = np.zeros_like(disp)
    else:
        vel = np.gradient(disp, dt, axis=0)
        acc = np.gradient(vel, dt, axis=0)
    return ResponseHistory(dt, disp, vel, acc, labels)
