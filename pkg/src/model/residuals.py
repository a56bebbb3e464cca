from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from src.config import FiniteDifference
from src.model.charts import (
    CHART, CHART_INVERSE, RiemannState, UVWState, char_speeds, from_riemann,
    to_riemann
)


@dataclass(frozen=True)
class UVWJet:
    """First jet of a solution in the (u, v, w) chart."""
    t: float
    x: float
    state: UVWState
    sx: np.ndarray
    st: np.ndarray


@dataclass(frozen=True)
class JetPoint:
    """Jet in Riemann invariants; rxx is only needed by the generalized
    symmetry checks."""
    t: float
    x: float
    state: RiemannState
    rx: np.ndarray
    rt: np.ndarray
    rxx: Optional[np.ndarray] = field(default=None)


def residual_uvw(j: UVWJet) -> np.ndarray:
    u, v, _ = j.state.u, j.state.v, j.state.w
    ux, vx, wx = j.sx
    ut, vt, wt = j.st
    return np.array([
        ut + u * ux + vx,
        vt + u * vx + ux,
        wt + u * wx,
    ])


def residual_riemann(j: JetPoint) -> np.ndarray:
    speeds = np.array(char_speeds(j.state.r1, j.state.r2))
    return np.asarray(j.rt) + speeds * np.asarray(j.rx)


def to_riemann_jet(j: UVWJet) -> JetPoint:
    return JetPoint(
        j.t, j.x, to_riemann(j.state), CHART @ j.sx, CHART @ j.st
    )


def to_uvw_jet(j: JetPoint) -> UVWJet:
    return UVWJet(
        j.t, j.x, from_riemann(j.state),
        CHART_INVERSE @ np.asarray(j.rx), CHART_INVERSE @ np.asarray(j.rt)
    )


def fd_jet(evaluate: Callable[[float, float], UVWState], t: float, x: float,
           h: float = FiniteDifference.STEP) -> UVWJet:
    """Central-difference jet of a sampler (t, x) -> UVWState."""
    state = evaluate(t, x)
    sx = (evaluate(t, x + h).as_array()
          - evaluate(t, x - h).as_array()) / (2.0 * h)
    st = (evaluate(t + h, x).as_array()
          - evaluate(t - h, x).as_array()) / (2.0 * h)
    return UVWJet(t, x, state, sx, st)
