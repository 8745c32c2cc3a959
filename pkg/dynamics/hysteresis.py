"""Smooth Giuffre-Menegotto-Pinto story spring without isotropic hardening.

Force-displacement form of the classic steel law: a bilinear asymptote pair
(initial stiffness k0, hardening b*k0) joined by a curved transition whose
sharpness R = r0 * (1 - cr1*xi / (cr2 + xi)) shrinks with the plastic excursion
xi of the previous half cycle. Each response call works from the committed
state carried by the spring and returns the spring holding the trial state, so
Newton iterations can re-evaluate freely and the caller commits by keeping the
returned spring.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from core.errors import ArgumentError

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SpringState:
    kon: int = 0  # 0 virgin, 1 loading, 2 unloading, 3 virgin at rest
    u: float = 0.0
    force: float = 0.0
    tangent: float = 0.0
    u_min: float = 0.0
    u_max: float = 0.0
    u_plastic: float = 0.0
    u_asym: float = 0.0  # asymptote intersection
    f_asym: float = 0.0
    u_rev: float = 0.0  # last reversal point
    f_rev: float = 0.0


@dataclass(frozen=True)
class HystereticSpring:
    k0: float
    Fy: float
    b: float = 0.03
    r0: float = 18.0
    cr1: float = 0.925
    cr2: float = 0.15
    state: SpringState = field(default_factory=SpringState)

    def __post_init__(self):
        if not self.k0 > 0:
            raise ArgumentError(f"spring stiffness k0 must be positive, got {self.k0}")
        if not self.Fy > 0:
            raise ArgumentError(f"spring yield force Fy must be positive, got {self.Fy}")
        if not 0 <= self.b < 1:
            raise ArgumentError(f"post-yield ratio b must be in [0, 1), got {self.b}")

    @property
    def uy(self) -> float:
        return self.Fy / self.k0

    def reset(self) -> "HystereticSpring":
        return replace(self, state=SpringState())


def spring_response(spring: HystereticSpring, u: float) -> tuple[float, float, HystereticSpring]:
    """Return (force, tangent stiffness, spring carrying the trial state) at displacement u."""
    s = spring.state
    k0, fy, b = spring.k0, spring.Fy, spring.b
    kh = b * k0
    uy = spring.uy
    du = u - s.u

    kon = s.kon
    u_min, u_max, u_pl = s.u_min, s.u_max, s.u_plastic
    u_asym, f_asym = s.u_asym, s.f_asym
    u_rev, f_rev = s.u_rev, s.f_rev

    if kon in (0, 3):
        if abs(du) < _EPS:
            trial = replace(s, kon=3, u=u, force=0.0, tangent=k0)
            return 0.0, k0, replace(spring, state=trial)
        u_max, u_min = uy, -uy
        if du < 0:
            kon, u_asym, f_asym, u_pl = 2, u_min, -fy, u_min
        else:
            kon, u_asym, f_asym, u_pl = 1, u_max, fy, u_max

    if kon == 2 and du > 0:
        kon = 1
        u_rev, f_rev = s.u, s.force
        u_min = min(u_min, s.u)
        u_asym = (fy - kh * uy - f_rev + k0 * u_rev) / (k0 - kh)
        f_asym = fy + kh * (u_asym - uy)
        u_pl = u_max
    elif kon == 1 and du < 0:
        kon = 2
        u_rev, f_rev = s.u, s.force
        u_max = max(u_max, s.u)
        u_asym = (-fy + kh * uy - f_rev + k0 * u_rev) / (k0 - kh)
        f_asym = -fy + kh * (u_asym + uy)
        u_pl = u_min

    xi = abs((u_pl - u_asym) / uy)
    r = spring.r0 * (1.0 - spring.cr1 * xi / (spring.cr2 + xi))
    ratio = (u - u_rev) / (u_asym - u_rev)
    dum1 = 1.0 + abs(ratio) ** r
    dum2 = dum1 ** (1.0 / r)
    force_ratio = b * ratio + (1.0 - b) * ratio / dum2
    force = force_ratio * (f_asym - f_rev) + f_rev
    tangent = (b + (1.0 - b) / (dum1 * dum2)) * (f_asym - f_rev) / (u_asym - u_rev)

    trial = SpringState(
        kon=kon, u=u, force=force, tangent=tangent,
        u_min=u_min, u_max=u_max, u_plastic=u_pl,
        u_asym=u_asym, f_asym=f_asym, u_rev=u_rev, f_rev=f_rev,
    )
    return force, tangent, replace(spring, state=trial)


def loop_work(displacements: np.ndarray, forces: np.ndarray) -> float:
    """Trapezoidal work integral of a force-displacement trace."""
    du = np.diff(displacements)
    return float(np.sum(0.5 * (forces[1:] + forces[:-1]) * du))
