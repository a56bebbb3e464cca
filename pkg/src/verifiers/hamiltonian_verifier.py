"""
Hamiltonian form r_t = P_lambda(grad h) of the diagonal system with the
first-order operator

    P_lambda = e^{r2 - r1} diag(1, -1, lambda e^{r2 - r1}) D_x
               + 1/2 e^{r2 - r1} M(r, r_x)

and the density h = -1/4 e^{r1 - r2} ((r1 + r2)^2 + 2 (r1 - r2)).
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import sympy as sp

from src.config import FiniteDifference, Tolerance
from src.model.charts import UVWState, char_speeds, to_riemann
from src.solutions.base import ExactSolution
from src.solutions.sampling import GridSpec, sample_to_grid
from src.verifiers.results import CheckResult, order_check, tolerance_check

LAMBDAS = (0.0, 1.0, -2.0)

_R = sp.symbols('r1 r2 r3')
DENSITY = -sp.Rational(1, 4) * sp.exp(_R[0] - _R[1]) * (
    (_R[0] + _R[1]) ** 2 + 2 * (_R[0] - _R[1])
)
_grad = sp.lambdify(_R, [sp.diff(DENSITY, s) for s in _R], 'numpy')
_hess = sp.lambdify(_R, sp.hessian(DENSITY, _R), 'numpy')


def gradient(r: np.ndarray) -> np.ndarray:
    """Variational derivative of H; the density carries no derivatives."""
    return np.array(_grad(*r), dtype=float)


def hessian(r: np.ndarray) -> np.ndarray:
    return np.array(_hess(*r), dtype=float)


@dataclass
class HamiltonianCheck:
    lam: float = 1.0
    h: float = FiniteDifference.REFINEMENT[-1]

    def apply(self, r: np.ndarray, rx: np.ndarray, g: np.ndarray,
              gx: np.ndarray) -> np.ndarray:
        """P_lambda(g) given g and D_x g at a point with jet (r, r_x)."""
        e = np.exp(r[1] - r[0])
        d = rx[0] - rx[1]
        M = np.array([
            [-d, d, -2.0 * rx[2]],
            [-d, d, -2.0 * rx[2]],
            [2.0 * rx[2], 2.0 * rx[2], -2.0 * self.lam * e * d],
        ])
        scale = np.array([1.0, -1.0, self.lam * e])
        return e * scale * gx + 0.5 * e * (M @ g)


def hamiltonian_jet_residual(hc: HamiltonianCheck, r: np.ndarray,
                             rx: np.ndarray) -> np.ndarray:
    """P_lambda(grad h) + diag(V) r_x with D_x grad h = Hess(h) r_x."""
    r, rx = np.asarray(r, dtype=float), np.asarray(rx, dtype=float)
    V = np.array(char_speeds(r[0], r[1]))
    return hc.apply(r, rx, gradient(r), hessian(r) @ rx) + V * rx


def hamiltonian_residual(sol: ExactSolution, hc: HamiltonianCheck,
                         t: float, x: float, hint=None,
                         h: Optional[float] = None) -> np.ndarray:
    """
    P_lambda(grad h) - r_t on a solution with r_x, r_t and D_x grad h all
    taken by central differences of step h.
    """
    h = hc.h if h is None else h

    def state(tt, xx) -> np.ndarray:
        return to_riemann(sol.evaluate(tt, xx, hint)).as_array()

    r = state(t, x)
    left, right = state(t, x - h), state(t, x + h)
    rx = (right - left) / (2.0 * h)
    rt = (state(t + h, x) - state(t - h, x)) / (2.0 * h)
    gx = (gradient(right) - gradient(left)) / (2.0 * h)
    return hc.apply(r, rx, gradient(r), gx) - rt


def _anchors(sol: ExactSolution, spec: GridSpec,
             threads: Optional[int] = None):
    sample = sample_to_grid(sol, spec, threads)
    return [
        (float(t), float(x), sol.guess_from(UVWState(*sample.uvw[i, j])))
        for i, t in enumerate(sample.t) for j, x in enumerate(sample.x)
    ]


def hamiltonian_check(sol: ExactSolution, lam: float, spec: GridSpec,
                      steps: Sequence[float] = FiniteDifference.REFINEMENT,
                      threads: Optional[int] = None) -> CheckResult:
    hc = HamiltonianCheck(lam)
    anchors = _anchors(sol, spec, threads)
    errors = [
        max(float(np.max(np.abs(hamiltonian_residual(sol, hc, t, x, hint, h))))
            for t, x, hint in anchors)
        for h in steps
    ]
    return order_check(f'hamiltonian/{sol.FAMILY}/lambda={lam:g}', steps,
                       errors, points=len(anchors))


def jet_identity_check(rng: np.random.Generator, samples: int = 1000,
                       lambdas: Sequence[float] = LAMBDAS) -> CheckResult:
    """The representation holds at arbitrary jets, not only on solutions."""
    worst = 0.0
    for _ in range(samples):
        r = rng.uniform(-1.0, 1.0, 3)
        rx = rng.uniform(-1.0, 1.0, 3)
        for lam in lambdas:
            res = hamiltonian_jet_residual(HamiltonianCheck(lam), r, rx)
            worst = max(worst, float(np.max(np.abs(res))))
    return tolerance_check('hamiltonian/jet-identity', worst,
                           Tolerance.GENSYM, samples=samples)


def hamiltonian_suite(sol: ExactSolution, spec: GridSpec,
                      rng: np.random.Generator,
                      lambdas: Sequence[float] = LAMBDAS,
                      threads: Optional[int] = None) -> List[CheckResult]:
    checks = [jet_identity_check(rng, lambdas=lambdas)]
    checks.extend(hamiltonian_check(sol, lam, spec, threads=threads)
                  for lam in lambdas)
    return checks
