"""Ground-truth simulators behind a common interface.

An oracle maps a ground-motion record to a response history on the record
grid, and knows how its responses are normalized for the network.
"""

from abc import ABCMeta, abstractmethod
from dataclasses import asdict, dataclass, field
from typing import Any

from dynamics.frame import ShearFrame
from dynamics.hht import IntegratorConfig
from dynamics.history import ResponseHistory
from dynamics.rocking import RockingBlock, simulate_rocking
from dynamics.time_history import simulate_frame
from signals.records import GroundMotionRecord


class BaseOracle(metaclass=ABCMeta):
    """Abstract base class for the structural simulators."""

    kind: str

    @abstractmethod
    def __call__(self, record: GroundMotionRecord) -> ResponseHistory:
        """Simulate `record`; the returned history lies on the record grid."""
        ...

    @abstractmethod
    def to_params(self) -> dict[str, Any]:
        raise NotImplementedError

    @property
    @abstractmethod
    def n(self) -> int:
        """Number of response channels predicted by the network."""

    @property
    @abstractmethod
    def response_scale(self) -> float:
        """Physical normalizer of the response channels."""


@dataclass(frozen=True, eq=False)
class FrameOracle(BaseOracle):
    frame: ShearFrame
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    kind: str = "frame"

    def __call__(self, record: GroundMotionRecord) -> ResponseHistory:
        history = simulate_frame(self.frame, record, self.integrator)
        return history.resampled(record.dt)

    @property
    def n(self) -> int:
        return self.frame.n

    @property
    def response_scale(self) -> float:
        return self.frame.story_height

    def to_params(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "masses": list(self.frame.masses),
            "springs": [
                {"k0": s.k0, "Fy": s.Fy, "b": s.b, "r0": s.r0, "cr1": s.cr1, "cr2": s.cr2}
                for s in self.frame.springs
            ],
            "story_height": self.frame.story_height,
            "rayleigh": asdict(self.frame.rayleigh),
            "integrator": asdict(self.integrator),
        }


@dataclass(frozen=True, eq=False)
class RockingOracle(BaseOracle):
    block: RockingBlock
    dt: float = 1e-4
    kind: str = "rocking"

    def __call__(self, record: GroundMotionRecord) -> ResponseHistory:
        return simulate_rocking(self.block, record, self.dt)

    @property
    def n(self) -> int:
        return 1

    @property
    def response_scale(self) -> float:
        return self.block.alpha

    def to_params(self) -> dict[str, Any]:
        return {"kind": self.kind, **asdict(self.block), "dt": self.dt}
