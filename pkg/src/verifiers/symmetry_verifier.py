"""
Point symmetries acting on solutions: the finite transformations of the
complete point symmetry group and one-step flows along Lie symmetry fields.

A group element acts by

    t' = T1 t + T0,  x' = T1 x + T1 U0 t + X0,
    u' = u + U0,     v' = v + V0,             w' = Wmap(w).
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple, Union

import numpy as np
import sympy as sp

from src.algebra.lie_algebra import W_SYMBOL, GVector
from src.config import Flow, Tolerance
from src.model.charts import UVWState
from src.model.residuals import UVWJet, residual_uvw
from src.solutions.base import ExactSolution, Guess
from src.telegraph.functions import (
    AffineFn, ComposedFn, IdentityFn, MonotoneFn, OddCubicFn
)
from src.util.errors import DomainError, DriftFluxError
from src.util.utils import fit_order
from src.verifiers.results import CheckResult, tolerance_check

Point = Tuple[float, float]


@dataclass(frozen=True)
class GroupParams:
    T0: float = 0.0
    T1: float = 1.0
    X0: float = 0.0
    U0: float = 0.0
    V0: float = 0.0
    Wmap: MonotoneFn = field(default_factory=IdentityFn)

    def __post_init__(self):
        if self.T1 == 0:
            raise DomainError('T1 must be nonzero')
        if not isinstance(self.Wmap, MonotoneFn):
            raise DomainError('Wmap must be a strictly monotone function')

    def push_point(self, t: float, x: float) -> Point:
        return (self.T1 * t + self.T0,
                self.T1 * x + self.T1 * self.U0 * t + self.X0)

    def pull_point(self, t: float, x: float) -> Point:
        return ((t - self.T0) / self.T1,
                (x - self.X0 - self.U0 * (t - self.T0)) / self.T1)

    def push_state(self, s: UVWState) -> UVWState:
        return UVWState(s.u + self.U0, s.v + self.V0, float(self.Wmap(s.w)))

    def pull_state(self, s: UVWState) -> UVWState:
        return UVWState(s.u - self.U0, s.v - self.V0,
                        float(self.Wmap.inverse(s.w)))

    def describe(self) -> Dict:
        return {'T0': self.T0, 'T1': self.T1, 'X0': self.X0, 'U0': self.U0,
                'V0': self.V0, 'W': self.Wmap.describe()}


def compose(g2: GroupParams, g1: GroupParams) -> GroupParams:
    """g2 after g1."""
    return GroupParams(
        T0=g2.T1 * g1.T0 + g2.T0,
        T1=g2.T1 * g1.T1,
        X0=g2.T1 * g1.X0 + g2.T1 * g2.U0 * g1.T0 + g2.X0,
        U0=g1.U0 + g2.U0,
        V0=g1.V0 + g2.V0,
        Wmap=ComposedFn(g2.Wmap, g1.Wmap),
    )


def reflection_tx() -> GroupParams:
    """(t, x, u, v, w) -> (-t, -x, u, v, w)."""
    return GroupParams(T1=-1.0)


def reflection_w() -> GroupParams:
    """(t, x, u, v, w) -> (t, x, u, v, -w)."""
    return GroupParams(Wmap=AffineFn(-1.0))


def random_params(rng: np.random.Generator) -> GroupParams:
    kind = rng.integers(3)
    if kind == 0:
        wmap = IdentityFn()
    elif kind == 1:
        wmap = AffineFn(float(rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)),
                        float(rng.uniform(-1.0, 1.0)))
    else:
        wmap = OddCubicFn(float(rng.uniform(0.5, 1.5)),
                          float(rng.uniform(0.5, 1.5)))
    return GroupParams(
        T0=float(rng.uniform(-1.0, 1.0)),
        T1=float(rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)),
        X0=float(rng.uniform(-1.0, 1.0)),
        U0=float(rng.uniform(-1.0, 1.0)),
        V0=float(rng.uniform(-1.0, 1.0)),
        Wmap=wmap,
    )


class TransformedSolution(ExactSolution):
    """Image of a solution under a group element; guesses stay in the
    source's parameterization."""

    FAMILY = 'transformed'
    ANALYTIC_JET = False

    def __init__(self, source: ExactSolution, g: GroupParams, *args, **kwargs):
        kwargs.setdefault('fd_step', source.fd_step)
        super().__init__(*args, **kwargs)
        self.source = source
        self.g = g

    def evaluate(self, t, x, guess=None):
        ts, xs = self.g.pull_point(t, x)
        try:
            state = self.source.evaluate(ts, xs, guess)
        except DriftFluxError as e:
            raise DomainError(
                f'pulled-back point ({ts:.6g}, {xs:.6g}) is outside the '
                f'source domain: {e}'
            ) from e
        return self.g.push_state(state)

    def guess_from(self, state: UVWState) -> Guess:
        return self.source.guess_from(self.g.pull_state(state))

    def describe(self):
        return {'family': self.FAMILY, 'source': self.source.describe(),
                'group': self.g.describe()}


def orbit_transform(sol: ExactSolution, g: GroupParams) -> TransformedSolution:
    return TransformedSolution(sol, g)


def _hint(sol: ExactSolution, t: float, x: float, guess: Guess = None) -> Guess:
    return sol.guess_from(sol.evaluate(t, x, guess))


def orbit_residual(sol: ExactSolution, g: GroupParams,
                   points: Sequence[Point]) -> float:
    """Max finite-difference residual of the image at the pushed points."""
    image = orbit_transform(sol, g)
    worst = 0.0
    for t, x in points:
        hint = _hint(sol, t, x, sol.guess)
        jet = image.fd_jet(*g.push_point(t, x), hint)
        worst = max(worst, float(np.max(np.abs(residual_uvw(jet)))))
    return worst


def orbit_check(sol: ExactSolution, params: Sequence[GroupParams],
                points: Sequence[Point]) -> CheckResult:
    worst = max(orbit_residual(sol, g, points) for g in params)
    return tolerance_check(f'orbit/{sol.FAMILY}', worst, Tolerance.FD_RESIDUAL,
                           transforms=len(params))


def group_law_defect(sol: ExactSolution, g1: GroupParams, g2: GroupParams,
                     points: Sequence[Point]) -> float:
    """Distance between acting twice and acting once by the composition."""
    twice = orbit_transform(orbit_transform(sol, g1), g2)
    once = orbit_transform(sol, compose(g2, g1))
    worst = 0.0
    for t, x in points:
        hint = _hint(sol, t, x, sol.guess)
        tt, xx = g2.push_point(*g1.push_point(t, x))
        a = twice.evaluate(tt, xx, hint).as_array()
        b = once.evaluate(tt, xx, hint).as_array()
        worst = max(worst, float(np.max(np.abs(a - b) / (1.0 + np.abs(a)))))
    return worst


def group_law_check(sol: ExactSolution, pairs, points) -> CheckResult:
    worst = max(group_law_defect(sol, g1, g2, points) for g1, g2 in pairs)
    return tolerance_check(f'group-law/{sol.FAMILY}', worst,
                           Tolerance.GROUP_LAW, pairs=len(pairs))


# Flows

J_BREVE = 'J'

Characteristic = Callable[[float, float, UVWJet], np.ndarray]


def _gvector_field(Q: GVector):
    aD, aG, aPt, aPx, aPv = (float(c) for c in Q.coeffs)
    omega = sp.lambdify(W_SYMBOL, Q.omega.as_expr(), 'numpy')
    domega = sp.lambdify(W_SYMBOL, Q.omega.diff(W_SYMBOL).as_expr(), 'numpy')

    def tau(t, x, s):
        return aD * t + aPt

    def xi(t, x, s):
        return aD * x + aG * t + aPx

    def phi(t, x, s):
        return np.array([aG, aPv, float(omega(s.w))])

    return tau, xi, phi, omega, domega


def _j_breve_field():
    def tau(t, x, s):
        return 0.5 * x - t * s.u

    def xi(t, x, s):
        return t * (s.v - 0.5 * s.u * s.u + 0.5)

    def phi(t, x, s):
        return np.array([s.v, s.u, 0.0])

    return tau, xi, phi


def characteristic(Q: Union[GVector, str]) -> Characteristic:
    """Evolutionary form phi - tau s_t - xi s_x of a point symmetry field."""
    if isinstance(Q, str):
        tau, xi, phi = _j_breve_field()
    else:
        tau, xi, phi, _, _ = _gvector_field(Q)

    def eta(t, x, jet: UVWJet) -> np.ndarray:
        s = jet.state
        return phi(t, x, s) - tau(t, x, s) * jet.st - xi(t, x, s) * jet.sx
    return eta


def _is_translation(Q) -> bool:
    return not isinstance(Q, str) and Q.aD == 0 and Q.aG == 0


def _translated_defect(sol, Q: GVector, eps: float, t, x, hint) -> np.ndarray:
    """Residual after the exact flow of a translation field (plus W-part)."""
    _, _, _, omega, domega = _gvector_field(Q)
    jet = sol.jet(t - eps * float(Q.aPt), x - eps * float(Q.aPx), hint)
    s = jet.state
    scale = 1.0 + eps * float(domega(s.w))
    moved = UVWJet(
        t, x,
        UVWState(s.u, s.v + eps * float(Q.aPv), s.w + eps * float(omega(s.w))),
        jet.sx * np.array([1.0, 1.0, scale]),
        jet.st * np.array([1.0, 1.0, scale]),
    )
    return residual_uvw(moved)


def _euler_defect(sol, eta: Characteristic, eps: float, t, x, hint,
                  h: float) -> np.ndarray:
    """Residual of s + eps * eta, with eta differentiated numerically."""
    def eta_at(tt, xx):
        return eta(tt, xx, sol.jet(tt, xx, hint))

    jet = sol.jet(t, x, hint)
    e0 = eta_at(t, x)
    ex = (eta_at(t, x + h) - eta_at(t, x - h)) / (2.0 * h)
    et = (eta_at(t + h, x) - eta_at(t - h, x)) / (2.0 * h)
    moved = UVWJet(t, x, UVWState(*(jet.state.as_array() + eps * e0)),
                   jet.sx + eps * ex, jet.st + eps * et)
    return residual_uvw(moved)


def flow_defects(sol: ExactSolution, Q, eps_list: Sequence[float],
                 points: Sequence[Point], h: float = Flow.STEP) -> List[float]:
    """Max residual over `points` after one flow step of each length."""
    components = slice(0, 2) if isinstance(Q, str) else slice(0, 3)
    eta = None if _is_translation(Q) else characteristic(Q)
    hints = [_hint(sol, t, x, sol.guess) for t, x in points]
    defects = []
    for eps in eps_list:
        worst = 0.0
        for (t, x), hint in zip(points, hints):
            if eta is None:
                r = _translated_defect(sol, Q, eps, t, x, hint)
            else:
                r = _euler_defect(sol, eta, eps, t, x, hint, h)
            worst = max(worst, float(np.max(np.abs(r[components]))))
        defects.append(worst)
    return defects


def flow_order_test(sol: ExactSolution, Q, eps_list: Sequence[float] = Flow.EPSILONS,
                    points: Sequence[Point] = ((1.0, 0.0),),
                    h: float = Flow.STEP) -> Dict:
    """
    Fitted exponent p of defect ~ eps**p. Status is 'exact' when every
    defect is at the noise floor, 'inconclusive' when only some are and
    'fitted' otherwise.
    """
    floor = Flow.NOISE_FLOOR if sol.ANALYTIC_JET else Tolerance.NOISE_FLOOR
    defects = flow_defects(sol, Q, eps_list, points, h)
    below = [d <= floor for d in defects]
    if all(below):
        return {'status': 'exact', 'order': float('inf'), 'defects': defects}
    if any(below):
        return {'status': 'inconclusive', 'order': float('nan'),
                'defects': defects}
    return {'status': 'fitted', 'order': fit_order(eps_list, defects),
            'defects': defects}


def flow_check(sol: ExactSolution, Q, label: str,
               eps_list: Sequence[float] = Flow.EPSILONS,
               points: Sequence[Point] = ((1.0, 0.0),)) -> CheckResult:
    out = flow_order_test(sol, Q, eps_list, points)
    lo, hi = Flow.ORDER_WINDOW
    passed = out['status'] == 'exact' or (
        out['status'] == 'fitted' and lo <= out['order'] <= hi
    )
    return CheckResult(f'flow/{sol.FAMILY}/{label}', out['order'], lo,
                       bool(passed), 'order',
                       {'status': out['status'], 'eps': list(eps_list),
                        'defects': out['defects']})
