"""
Coordinate charts of the no-slip isothermal drift flux model.

The sound-speed constant is normalized to one, so the physical chart
(rho1, rho2, u) maps to (u, v, w) with v = ln(rho1 + rho2), w = rho1/rho2,
and further to the Riemann invariants r1 = (u+v)/2, r2 = (u-v)/2, r3 = w.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.util.errors import DomainError, SingularChartError

# r = CHART @ (u, v, w)
CHART = np.array([
    [0.5, 0.5, 0.0],
    [0.5, -0.5, 0.0],
    [0.0, 0.0, 1.0],
])
CHART_INVERSE = np.array([
    [1.0, 1.0, 0.0],
    [1.0, -1.0, 0.0],
    [0.0, 0.0, 1.0],
])


@dataclass(frozen=True)
class PhysState:
    rho1: float
    rho2: float
    u: float

    def __post_init__(self):
        if not (self.rho1 > 0 and self.rho2 > 0):
            raise DomainError(
                f'densities must be positive, got ({self.rho1}, {self.rho2})'
            )


@dataclass(frozen=True)
class UVWState:
    u: float
    v: float
    w: float

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v, self.w], dtype=float)


@dataclass(frozen=True)
class RiemannState:
    r1: float
    r2: float
    r3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.r1, self.r2, self.r3], dtype=float)


def to_uvw(p: PhysState) -> UVWState:
    if not (p.rho1 > 0 and p.rho2 > 0):
        raise DomainError('densities must be positive')
    return UVWState(p.u, float(np.log(p.rho1 + p.rho2)), p.rho1 / p.rho2)


def from_uvw(s: UVWState) -> PhysState:
    if s.w == -1.0:
        raise SingularChartError('w = -1 has no physical preimage')
    total = np.exp(s.v)
    return PhysState(
        float(s.w * total / (s.w + 1.0)),
        float(total / (s.w + 1.0)),
        s.u
    )


def to_riemann(s: UVWState) -> RiemannState:
    return RiemannState(0.5 * (s.u + s.v), 0.5 * (s.u - s.v), s.w)


def from_riemann(r: RiemannState) -> UVWState:
    return UVWState(r.r1 + r.r2, r.r1 - r.r2, r.r3)


def char_speeds(r1, r2) -> Tuple:
    """Characteristic velocities (V1, V2, V3); works on arrays too."""
    s = r1 + r2
    return s + 1.0, s - 1.0, s
