"""
The three families of the complete solution of the model in the (u, v, w)
chart and the generalized-hodograph representation in Riemann invariants.

Regular:        t = Phi_u,  x = u Phi_u - Phi_v - Phi,  w = W(e^v Phi_v)
Singular:       x - (u + eps) t = e^{-eps u} Theta_u,  v = eps u + c,
                w = W(e^{eps u} t + eps Theta_u - Theta)
Ultra-singular: u = u0, v = v0, w = W(x - u0 t)
"""

from threading import Lock
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from src.config import Newton
from src.model.charts import RiemannState, UVWState, from_riemann, to_riemann
from src.model.residuals import JetPoint, UVWJet, to_uvw_jet
from src.solutions.base import ExactSolution, Guess, newton_solve
from src.telegraph.functions import (
    MonotoneFn, NegatedInverseFn, PolyTheta, ThetaFn
)
from src.telegraph.modes import RiemannForm, TelegraphFn
from src.util.errors import (
    DegenerateFamilyError, DomainError, NoSolutionError
)


class RegularSolution(ExactSolution):

    FAMILY = 'regular'
    ANALYTIC_JET = True

    def __init__(self, phi: TelegraphFn, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.phi = phi
        # ((u_min, u_max), (v_min, v_max)) or None
        self.validity = kwargs.get('validity')

    def _system(self, z):
        u, v = z
        p = self.phi.partials(u, v)
        return p, np.array([
            [p.phi_uu, p.phi_uv],
            [u * p.phi_uu - p.phi_uv, u * p.phi_uv - p.phi_vv - p.phi_v],
        ])

    def solve(self, t: float, x: float, guess: Guess = None) -> Tuple[float, float]:
        guess = guess or self.guess or (0.0, 0.0)

        def fun(z):
            u, v = z
            p = self.phi.partials(u, v)
            return np.array([p.phi_u - t, u * p.phi_u - p.phi_v - p.phi - x])

        def jac(z):
            return self._system(z)[1]

        u, v = newton_solve(fun, jac, guess, **self.newton)
        if abs(np.linalg.det(jac((u, v)))) < self.newton['degeneracy_tol']:
            raise DegenerateFamilyError(
                f'Phi_uu^2 - Phi_uv^2 vanishes at (u, v) = ({u}, {v})'
            )
        if self.validity is not None:
            (u_lo, u_hi), (v_lo, v_hi) = self.validity
            if not (u_lo <= u <= u_hi and v_lo <= v <= v_hi):
                raise NoSolutionError(
                    f'(u, v) = ({u:.6g}, {v:.6g}) leaves the validity window'
                )
        return float(u), float(v)

    def evaluate(self, t, x, guess=None):
        u, v = self.solve(t, x, guess)
        p = self.phi.partials(u, v)
        return UVWState(u, v, float(self.W(np.exp(v) * p.phi_v)))

    def jet(self, t, x, guess=None):
        u, v = self.solve(t, x, guess)
        p, J = self._system((u, v))
        det = np.linalg.det(J)
        ut, vt = J[1, 1] / det, -J[1, 0] / det
        ux, vx = -J[0, 1] / det, J[0, 0] / det
        ev = np.exp(v)
        s = ev * p.phi_v
        dW = self.W.derivative(s)
        s_u, s_v = ev * p.phi_uv, ev * (p.phi_v + p.phi_vv)
        wt = dW * (s_u * ut + s_v * vt)
        wx = dW * (s_u * ux + s_v * vx)
        state = UVWState(u, v, float(self.W(s)))
        return UVWJet(t, x, state, np.array([ux, vx, wx], dtype=float),
                      np.array([ut, vt, wt], dtype=float))

    def guess_from(self, state):
        return (state.u, state.v)

    def describe(self):
        return dict(super().describe(), phi=self.phi.describe())


class SingularSolution(ExactSolution):

    FAMILY = 'singular'
    ANALYTIC_JET = True
    SCAN_POINTS = 400

    def __init__(self, eps: int, c: float = 0.0,
                 theta: Optional[ThetaFn] = None, *args, **kwargs):
        super().__init__(*args, **kwargs)
        if eps not in (1, -1):
            raise DomainError(f'eps must be +1 or -1, got {eps}')
        self.eps = eps
        self.c = c
        self.theta = theta or PolyTheta(())
        self.interval = kwargs.get('interval', (-50.0, 50.0))
        self.lock = Lock()

    def _residual(self, u, t, x):
        _, th_u, _ = self.theta.derivatives(u)
        return x - (u + self.eps) * t - np.exp(-self.eps * u) * th_u

    def _residual_u(self, u, t):
        _, th_u, th_uu = self.theta.derivatives(u)
        e = np.exp(-self.eps * u)
        return -t + self.eps * e * th_u - e * th_uu

    def solve_u(self, t: float, x: float, guess=None) -> Tuple[float, bool]:
        """Root for u nearest the guess and a flag for multiple roots."""
        lo, hi = self.interval
        grid = np.linspace(lo, hi, self.SCAN_POINTS + 1)
        values = self._residual(grid, t, x)
        roots: List[float] = [float(g) for g, f in zip(grid, values) if f == 0.0]
        for k in np.nonzero(values[:-1] * values[1:] < 0)[0]:
            roots.append(brentq(self._residual, grid[k], grid[k + 1],
                                args=(t, x), xtol=1e-14, maxiter=200))
        anchor = self._anchor(t, x, guess)
        if not roots:
            # tangential roots do not change sign; try Newton from the anchor
            try:
                u = newton_solve(
                    lambda z: np.array([self._residual(z[0], t, x)]),
                    lambda z: np.array([[self._residual_u(z[0], t)]]),
                    (anchor,), **self.newton)
            except (NoSolutionError, DegenerateFamilyError):
                raise DomainError(
                    f'no root for u in {self.interval} at (t, x) = ({t}, {x})'
                )
            return float(u[0]), False
        roots = sorted(set(roots))
        best = min(roots, key=lambda r: abs(r - anchor))
        return float(best), len(roots) > 1

    def _anchor(self, t, x, guess) -> float:
        if guess is not None:
            return float(guess[0])
        if self.guess is not None:
            return float(self.guess[0])
        return x / t - self.eps if t != 0 else 0.0

    def _first_integral(self, u, t):
        th, th_u, th_uu = self.theta.derivatives(u)
        e = np.exp(self.eps * u)
        value = e * t + self.eps * th_u - th
        k = self.eps * e * t + self.eps * th_uu - th_u
        return value, k, e

    def _root(self, t, x, guess) -> float:
        u, multiple = self.solve_u(t, x, guess)
        if multiple:
            with self.lock:
                self.multiple_roots.add((float(t), float(x)))
        return u

    def evaluate(self, t, x, guess=None):
        u = self._root(t, x, guess)
        value, _, _ = self._first_integral(u, t)
        return UVWState(u, self.eps * u + self.c, float(self.W(value)))

    def jet(self, t, x, guess=None):
        u = self._root(t, x, guess)
        f_u = self._residual_u(u, t)
        if f_u == 0.0:
            raise DegenerateFamilyError(f'characteristic fan at (t, x) = ({t}, {x})')
        ux, ut = -1.0 / f_u, (u + self.eps) / f_u
        value, k, e = self._first_integral(u, t)
        dW = self.W.derivative(value)
        wt = dW * (e + k * ut)
        wx = dW * k * ux
        state = UVWState(u, self.eps * u + self.c, float(self.W(value)))
        return UVWJet(t, x, state,
                      np.array([ux, self.eps * ux, wx], dtype=float),
                      np.array([ut, self.eps * ut, wt], dtype=float))

    def guess_from(self, state):
        return (state.u, state.v)

    def describe(self):
        return dict(super().describe(), eps=self.eps, c=self.c,
                    theta=self.theta.describe())


class UltraSingularSolution(ExactSolution):

    FAMILY = 'ultra'
    ANALYTIC_JET = True

    def __init__(self, u0: float = 0.0, v0: float = 0.0, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.u0 = u0
        self.v0 = v0

    def evaluate(self, t, x, guess=None):
        return UVWState(self.u0, self.v0, float(self.W(x - self.u0 * t)))

    def jet(self, t, x, guess=None):
        xi = x - self.u0 * t
        dW = float(self.W.derivative(xi))
        return UVWJet(t, x, self.evaluate(t, x),
                      np.array([0.0, 0.0, dW]),
                      np.array([0.0, 0.0, -self.u0 * dW]))

    def describe(self):
        return dict(super().describe(), u0=self.u0, v0=self.v0)


class GenHodographSolution(ExactSolution):
    """
    x - (r1 + r2 + 1) t = Phi + Phi_1
    x - (r1 + r2 - 1) t = Phi - Phi_2
    x - (r1 + r2) t     = Phi + F(r3) e^{r2 - r1}
    with 2 Phi_12 = Phi_1 - Phi_2. Without F the third invariant is constant.
    """

    FAMILY = 'genhodograph'
    ANALYTIC_JET = True

    def __init__(self, phi_hat: RiemannForm, F: Optional[MonotoneFn] = None,
                 *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.phi_hat = phi_hat
        self.F = F
        self.r3 = kwargs.get('r3', 0.0)

    @classmethod
    def from_regular(cls, s: RegularSolution) -> 'GenHodographSolution':
        guess = None
        if s.guess is not None:
            u, v = s.guess
            guess = (0.5 * (u + v), 0.5 * (u - v))
        return cls(RiemannForm(s.phi.scaled(-1.0)), NegatedInverseFn(s.W),
                   tol=s.newton['tol'], max_iter=s.newton['max_iter'],
                   degeneracy_tol=s.newton['degeneracy_tol'],
                   guess=guess)

    def _jacobian(self, t, p):
        return np.array([
            [-t - p.f1 - p.f11, -t - p.f2 - p.f12],
            [-t - p.f1 + p.f12, -t - p.f2 + p.f22],
        ])

    def _guess(self, guess):
        if guess is not None:
            return guess
        if self.guess is not None:
            return self.guess
        return (0.0, 0.0)

    def solve(self, t: float, x: float, guess: Guess = None):
        def fun(z):
            r1, r2 = z
            p = self.phi_hat.partials(r1, r2)
            s = r1 + r2
            return np.array([
                x - (s + 1.0) * t - p.f - p.f1,
                x - (s - 1.0) * t - p.f + p.f2,
            ])

        def jac(z):
            return self._jacobian(t, self.phi_hat.partials(*z))

        r1, r2 = newton_solve(fun, jac, self._guess(guess), **self.newton)
        p = self.phi_hat.partials(r1, r2)
        if abs(p.f11 + p.f12) <= self.newton['degeneracy_tol']:
            raise DegenerateFamilyError(
                f'Phi_11 + Phi_12 vanishes at (r1, r2) = ({r1}, {r2})'
            )
        return float(r1), float(r2), p

    def _z(self, t, x, r1, r2, p):
        return (x - (r1 + r2) * t - p.f) * np.exp(r1 - r2)

    def evaluate_riemann(self, t, x, guess=None) -> RiemannState:
        r1, r2, p = self.solve(t, x, guess)
        if self.F is None:
            return RiemannState(r1, r2, self.r3)
        r3 = float(self.F.inverse(self._z(t, x, r1, r2, p)))
        return RiemannState(r1, r2, r3)

    def evaluate(self, t, x, guess=None):
        return from_riemann(self.evaluate_riemann(t, x, guess))

    def riemann_jet(self, t, x, guess=None):
        r1, r2, p = self.solve(t, x, guess)
        s = r1 + r2
        J = self._jacobian(t, p)
        rx = -np.linalg.solve(J, np.array([1.0, 1.0]))
        rt = -np.linalg.solve(J, np.array([-(s + 1.0), -(s - 1.0)]))
        if self.F is None:
            state = RiemannState(r1, r2, self.r3)
            return JetPoint(t, x, state, np.append(rx, 0.0),
                            np.append(rt, 0.0))
        z = self._z(t, x, r1, r2, p)
        r3 = float(self.F.inverse(z))
        e = np.exp(r1 - r2)
        base = x - s * t - p.f
        zx = e * (1.0 - t * (rx[0] + rx[1]) - p.f1 * rx[0] - p.f2 * rx[1]) \
            + base * e * (rx[0] - rx[1])
        zt = e * (-s - t * (rt[0] + rt[1]) - p.f1 * rt[0] - p.f2 * rt[1]) \
            + base * e * (rt[0] - rt[1])
        dF = self.F.derivative(r3)
        return JetPoint(t, x, RiemannState(r1, r2, r3),
                        np.append(rx, zx / dF), np.append(rt, zt / dF))

    def jet(self, t, x, guess=None):
        return to_uvw_jet(self.riemann_jet(t, x, guess))

    def guess_from(self, state):
        r = to_riemann(state)
        return (r.r1, r.r2)

    def describe(self):
        out = dict(super().describe(), phi=self.phi_hat.f.describe(),
                   swapped=self.phi_hat.swapped)
        out['F'] = self.F.describe() if self.F is not None else None
        if self.F is None:
            out['r3'] = self.r3
        return out


def jacobian_rank(jet: UVWJet, tol: float = Newton.DEGENERACY_TOL) -> Dict:
    """Rank data of (u, v) as a map of (t, x): 2, 1 or 0."""
    ux, vx, _ = jet.sx
    ut, vt, _ = jet.st
    det = ut * vx - ux * vt
    grad = max(abs(ux), abs(vx), abs(ut), abs(vt))
    if abs(det) > tol:
        rank = 2
    elif grad > tol:
        rank = 1
    else:
        rank = 0
    return {'rank': rank, 'det': float(det), 'grad': float(grad)}
