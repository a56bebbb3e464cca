"""
Conserved currents of the diagonal system and their checks: divergence of
(rho, sigma) on exact solutions, drift of the integrated density, pairing
of zeroth-order densities with their characteristics, and the omega chain
behind the arbitrary-order family.
"""

from abc import ABC, abstractmethod
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp
from scipy.integrate import trapezoid

from src.algebra.lie_algebra import W_SYMBOL
from src.config import FiniteDifference, Tolerance
from src.model.charts import UVWState, char_speeds, to_riemann
from src.model.residuals import JetPoint
from src.solutions.base import ExactSolution, Guess
from src.solutions.sampling import GridSpec, sample_to_grid
from src.telegraph.modes import RiemannForm
from src.util.errors import DomainError
from src.verifiers.results import CheckResult, order_check, tolerance_check

Window = Tuple[Tuple[float, float], Tuple[float, float]]

DRIFT_NODES = (16, 32, 64)
RX_FLOOR = 1e-14

T, X = sp.symbols('t x')
R = sp.symbols('r1 r2 r3')
PSI = sp.Function('Psi')(R[0], R[1])
PSI_JET = sp.symbols('p p1 p2 p11 p12 p22')


def _psi_partials() -> Tuple[sp.Expr, ...]:
    """Psi and its partials up to second order, in PSI_JET order."""
    r1, r2 = R[0], R[1]
    return (PSI, sp.diff(PSI, r1), sp.diff(PSI, r2), sp.diff(PSI, r1, 2),
            sp.diff(PSI, r1, r2), sp.diff(PSI, r2, 2))


def omega_symbols(kappa: int) -> Tuple[sp.Symbol, ...]:
    return tuple(sp.Symbol(f'w{i}') for i in range(kappa + 1))


class SolutionSampler:
    """Evaluates a solution near an anchor with a fixed Newton hint."""

    def __init__(self, sol: ExactSolution, hint: Guess = None):
        self.sol = sol
        self.hint = hint

    def state(self, t: float, x: float) -> np.ndarray:
        return to_riemann(self.sol.evaluate(t, x, self.hint)).as_array()

    def jet(self, t: float, x: float) -> JetPoint:
        return self.sol.riemann_jet(t, x, self.hint)

    def omega(self, iota: int, t: float, x: float,
              h: float = FiniteDifference.SECOND_STEP) -> float:
        """omega^iota = (e^{r2 - r1} D_x)^iota r3 by nested central differences."""
        r = self.state(t, x)
        if iota == 0:
            return float(r[2])
        up = self.omega(iota - 1, t, x + h, h)
        down = self.omega(iota - 1, t, x - h, h)
        return float(np.exp(r[1] - r[0]) * (up - down) / (2.0 * h))


class ConservedCurrent(ABC):

    ORDER = 0
    NAME = 'current'

    @abstractmethod
    def current(self, sampler: SolutionSampler, t: float,
                x: float) -> np.ndarray:
        pass

    def describe(self) -> Dict:
        return {'current': self.NAME}


class ZerothOrderCurrent(ConservedCurrent):
    """
    Density and flux depending on (t, x, r) only. Each current also states
    rho and sigma symbolically, with Psi an undetermined function of
    (r1, r2), so the pairing can be checked from exact partials.
    """

    @abstractmethod
    def rho(self, t, x, r: np.ndarray) -> float:
        pass

    @abstractmethod
    def sigma(self, t, x, r: np.ndarray) -> float:
        pass

    @abstractmethod
    def characteristic(self, t, x, r: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def expressions(self) -> Tuple[sp.Expr, sp.Expr]:
        """(rho, sigma) in T, X, R and PSI."""

    def psi_jet(self, r: np.ndarray) -> Tuple[float, ...]:
        """Values of (Psi, Psi_1, Psi_2, Psi_11, Psi_12, Psi_22) at r."""
        return (0.0,) * len(PSI_JET)

    @cached_property
    def pairing(self) -> Callable:
        """
        Lambdified [rho, sigma, rho_r1..3, sigma_r1..3, rho_t, sigma_x] over
        (t, x, r1, r2, r3) and the Psi jet.
        """
        rho, sigma = self.expressions()
        exprs = [rho, sigma]
        exprs += [sp.diff(rho, s) for s in R]
        exprs += [sp.diff(sigma, s) for s in R]
        exprs += [sp.diff(rho, T), sp.diff(sigma, X)]
        jet = dict(zip(_psi_partials(), PSI_JET))
        return sp.lambdify((T, X) + R + PSI_JET,
                           [e.xreplace(jet) for e in exprs], 'numpy')

    def current(self, sampler, t, x):
        r = sampler.state(t, x)
        return np.array([self.rho(t, x, r), self.sigma(t, x, r)])


class GeneralZeroth(ZerothOrderCurrent):
    """
    rho = e^{r1 - r2} Omega(r3) + Psi_1 - Psi_2,
    sigma = V3 e^{r1 - r2} Omega(r3) + V1 Psi_1 - V2 Psi_2,
    with Psi a solution of 2 Psi_12 = Psi_2 - Psi_1.
    """

    NAME = 'general-zeroth'

    def __init__(self, omega=0, psi: Optional[RiemannForm] = None):
        self.omega = sp.sympify(omega, locals={'w': W_SYMBOL})
        self.psi = psi
        if psi is not None and not psi.swapped:
            raise DomainError('Psi must solve the adjoint equation')
        self._omega = sp.lambdify(W_SYMBOL, self.omega, 'numpy')
        self._omega_w = sp.lambdify(W_SYMBOL, sp.diff(self.omega, W_SYMBOL),
                                    'numpy')

    def _psi(self, r):
        if self.psi is None:
            return (0.0,) * 6
        return self.psi.partials(r[0], r[1])

    def psi_jet(self, r):
        return tuple(float(p) for p in self._psi(r))

    def expressions(self):
        e = sp.exp(R[0] - R[1])
        om = self.omega.subs(W_SYMBOL, R[2])
        V1, V2, V3 = char_speeds(R[0], R[1])
        p1, p2 = (_psi_partials()[1:3] if self.psi is not None
                  else (sp.Integer(0), sp.Integer(0)))
        return e * om + p1 - p2, V3 * e * om + V1 * p1 - V2 * p2

    def rho(self, t, x, r):
        _, p1, p2, *_ = self._psi(r)
        return float(np.exp(r[0] - r[1]) * self._omega(r[2]) + p1 - p2)

    def sigma(self, t, x, r):
        V1, V2, V3 = char_speeds(r[0], r[1])
        _, p1, p2, *_ = self._psi(r)
        return float(V3 * np.exp(r[0] - r[1]) * self._omega(r[2])
                     + V1 * p1 - V2 * p2)

    def characteristic(self, t, x, r):
        _, _, _, p11, p12, p22 = self._psi(r)
        e = np.exp(r[0] - r[1])
        om = float(self._omega(r[2]))
        return np.array([e * om + p11 - p12, -e * om + p12 - p22,
                         e * float(self._omega_w(r[2]))])

    def describe(self):
        out = {'current': self.NAME, 'omega': str(self.omega)}
        if self.psi is not None:
            out['psi'] = self.psi.f.describe()
        return out


class DHC(GeneralZeroth):
    """Density e^{r1 - r2} r3."""

    NAME = 'dhc'

    def __init__(self):
        super().__init__(omega=W_SYMBOL)


class EHC(GeneralZeroth):

    NAME = 'ehc'

    def __init__(self, psi: RiemannForm):
        super().__init__(omega=0, psi=psi)


class NonTranslation(ZerothOrderCurrent):
    """(e^{r1 - r2}(x - V3 t), e^{r1 - r2}(V3 (x - V3 t) - t))."""

    NAME = 'non-translation'

    def rho(self, t, x, r):
        V3 = r[0] + r[1]
        return float(np.exp(r[0] - r[1]) * (x - V3 * t))

    def sigma(self, t, x, r):
        V3 = r[0] + r[1]
        return float(np.exp(r[0] - r[1]) * (V3 * (x - V3 * t) - t))

    def characteristic(self, t, x, r):
        e = np.exp(r[0] - r[1])
        y = x - (r[0] + r[1]) * t
        return np.array([e * (y - t), -e * (y + t), 0.0])

    def expressions(self):
        e = sp.exp(R[0] - R[1])
        V3 = R[0] + R[1]
        return e * (X - V3 * T), e * (V3 * (X - V3 * T) - T)


class C0(ConservedCurrent):
    """((1/r1_x - 1/r2_x) e^{r1 - r2}, (V1/r1_x - V2/r2_x) e^{r1 - r2})."""

    ORDER = 1
    NAME = 'c0'

    @staticmethod
    def from_jet(j: JetPoint) -> np.ndarray:
        r1, r2 = j.state.r1, j.state.r2
        r1x, r2x = float(j.rx[0]), float(j.rx[1])
        if abs(r1x) < RX_FLOOR or abs(r2x) < RX_FLOOR:
            raise DomainError(
                f'C0 needs r1_x and r2_x nonzero, got ({r1x:.3g}, {r2x:.3g})'
            )
        V1, V2, _ = char_speeds(r1, r2)
        e = np.exp(r1 - r2)
        return np.array([(1.0 / r1x - 1.0 / r2x) * e,
                         (V1 / r1x - V2 / r2x) * e])

    def current(self, sampler, t, x):
        return self.from_jet(sampler.jet(t, x))


class C1(ConservedCurrent):
    """
    (e^{r1 - r2} Omega, V3 e^{r1 - r2} Omega) with Omega a function of
    omega^0, ..., omega^kappa. omega^0 and omega^1 come from the jet; higher
    members of the chain are taken by finite differences.
    """

    ORDER = 1
    NAME = 'c1'

    def __init__(self, omega, kappa: Optional[int] = None, **kwargs):
        expr = sp.sympify(omega)
        used = [int(s.name[1:]) for s in expr.free_symbols
                if s.name.startswith('w') and s.name[1:].isdigit()]
        self.kappa = max(used, default=0) if kappa is None else kappa
        self.symbols = omega_symbols(self.kappa)
        self.omega = expr
        self._omega = sp.lambdify(self.symbols, expr, 'numpy')
        self.chain_step = kwargs.get('chain_step',
                                     FiniteDifference.SECOND_STEP)

    def omegas(self, sampler: SolutionSampler, t, x) -> Tuple[List[float], JetPoint]:
        j = sampler.jet(t, x)
        values = [j.state.r3]
        if self.kappa >= 1:
            values.append(float(np.exp(j.state.r2 - j.state.r1) * j.rx[2]))
        for iota in range(2, self.kappa + 1):
            values.append(sampler.omega(iota, t, x, self.chain_step))
        return values, j

    def current(self, sampler, t, x):
        values, j = self.omegas(sampler, t, x)
        rho = float(np.exp(j.state.r1 - j.state.r2) * self._omega(*values))
        return np.array([rho, (j.state.r1 + j.state.r2) * rho])

    def describe(self):
        return {'current': self.NAME, 'omega': str(self.omega),
                'kappa': self.kappa}


# First-order weights

def weight_expressions(c=sp.Symbol('c')) -> Dict[str, sp.Expr]:
    r1, r2 = sp.symbols('r1 r2')
    return {
        'G1': sp.exp(-r2 / 2),
        'G2': sp.exp(r1 / 2),
        'G3': sp.exp(r1 - r2),
        'f1': c * sp.exp(r1),
        'f2': -c * sp.exp(-r2),
    }


def weight_identities() -> List[sp.Expr]:
    """
    Simplified residuals of G^i_j / G^i + V^i_j / (V^i - V^j) for i != j and
    of d/dr (sum (G^i)^2 f^i); all of them must vanish identically.
    """
    r = sp.symbols('r1 r2 r3')
    V = (r[0] + r[1] + 1, r[0] + r[1] - 1, r[0] + r[1])
    w = weight_expressions()
    G = (w['G1'], w['G2'], w['G3'])
    out = []
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            expr = sp.diff(G[i], r[j]) / G[i] \
                + sp.diff(V[i], r[j]) / (V[i] - V[j])
            out.append(sp.simplify(expr))
    total = G[0] ** 2 * w['f1'] + G[1] ** 2 * w['f2']
    out.extend(sp.simplify(sp.diff(total, s)) for s in r)
    return out


class WeightedCurrent(ConservedCurrent):
    """
    First-order current assembled from the weights,
    rho = sum_i (G^i)^2 f^i / r^i_x + G^3 Omega(omega^0, omega^1),
    which reduces to c C0 + C1(Omega).
    """

    ORDER = 1
    NAME = 'weighted'

    def __init__(self, c: float, omega):
        self.c = c
        self.c1 = C1(omega, kappa=1)
        w = weight_expressions(c)
        r1, r2 = sp.symbols('r1 r2')
        self._weights = {
            k: sp.lambdify((r1, r2), e, 'numpy') for k, e in w.items()
        }

    def current(self, sampler, t, x):
        values, j = self.c1.omegas(sampler, t, x)
        r1, r2 = j.state.r1, j.state.r2
        V = char_speeds(r1, r2)
        wt = {k: float(f(r1, r2)) for k, f in self._weights.items()}
        rho, sigma = 0.0, 0.0
        for i, (G, f) in enumerate((('G1', 'f1'), ('G2', 'f2'))):
            if abs(j.rx[i]) < RX_FLOOR:
                raise DomainError(f'weighted current needs r{i + 1}_x nonzero')
            term = wt[G] ** 2 * wt[f] / float(j.rx[i])
            rho += term
            sigma += V[i] * term
        om = wt['G3'] * float(self.c1._omega(*values))
        return np.array([rho + om, sigma + V[2] * om])

    def describe(self):
        return {'current': self.NAME, 'c': self.c, 'omega': str(self.c1.omega)}


# Checks

def _anchors(sol: ExactSolution, window: Window, n: int,
             threads: Optional[int] = None):
    (t0, t1), (x0, x1) = window
    sample = sample_to_grid(sol, GridSpec((t0, t1), (x0, x1), n, n), threads)
    for i, t in enumerate(sample.t):
        for j, x in enumerate(sample.x):
            hint = sol.guess_from(UVWState(*sample.uvw[i, j]))
            yield float(t), float(x), SolutionSampler(sol, hint)


def divergence(cur: ConservedCurrent, sampler: SolutionSampler, t: float,
               x: float, h: float) -> float:
    """Central-difference D_t rho + D_x sigma."""
    rho_t = (cur.current(sampler, t + h, x)[0]
             - cur.current(sampler, t - h, x)[0]) / (2.0 * h)
    sigma_x = (cur.current(sampler, t, x + h)[1]
               - cur.current(sampler, t, x - h)[1]) / (2.0 * h)
    return float(rho_t + sigma_x)


def divergence_check(cur: ConservedCurrent, sol: ExactSolution, window: Window,
                     n: int = 6, steps: Sequence[float] = FiniteDifference.REFINEMENT,
                     threads: Optional[int] = None) -> CheckResult:
    anchors = list(_anchors(sol, window, n, threads))
    errors = [
        max(abs(divergence(cur, sampler, t, x, h)) for t, x, sampler in anchors)
        for h in steps
    ]
    return order_check(f'conservation/{cur.NAME}/{sol.FAMILY}/divergence',
                       steps, errors, points=n * n)


def _line(cur: ConservedCurrent, sol: ExactSolution, points, column: int):
    """Current component along a line of points with continuation."""
    values = []
    hint = None
    for t, x in points:
        state = sol.evaluate(t, x, hint)
        hint = sol.guess_from(state)
        values.append(cur.current(SolutionSampler(sol, hint), t, x)[column])
    return np.array(values)


def integral_drift(cur: ConservedCurrent, sol: ExactSolution, window: Window,
                   nodes: int) -> float:
    """|int rho(t1) dx - int rho(t0) dx + int (sigma(x1) - sigma(x0)) dt|."""
    (t0, t1), (x0, x1) = window
    xs = np.linspace(x0, x1, nodes + 1)
    ts = np.linspace(t0, t1, nodes + 1)
    mass_0 = trapezoid(_line(cur, sol, [(t0, x) for x in xs], 0), xs)
    mass_1 = trapezoid(_line(cur, sol, [(t1, x) for x in xs], 0), xs)
    flux_in = trapezoid(_line(cur, sol, [(t, x0) for t in ts], 1), ts)
    flux_out = trapezoid(_line(cur, sol, [(t, x1) for t in ts], 1), ts)
    return float(abs(mass_1 - mass_0 + flux_out - flux_in))


def drift_check(cur: ConservedCurrent, sol: ExactSolution, window: Window,
                nodes: Sequence[int] = DRIFT_NODES) -> CheckResult:
    (t0, t1), (x0, x1) = window
    steps = [max(t1 - t0, x1 - x0) / n for n in nodes]
    errors = [integral_drift(cur, sol, window, n) for n in nodes]
    return order_check(f'conservation/{cur.NAME}/{sol.FAMILY}/drift',
                       steps, errors, nodes=list(nodes))


def conservation_check(cur: ConservedCurrent, sol: ExactSolution,
                       window: Window, n: int = 6,
                       threads: Optional[int] = None) -> List[CheckResult]:
    return [divergence_check(cur, sol, window, n, threads=threads),
            drift_check(cur, sol, window)]


def _relative(a: float, b: float) -> float:
    return abs(a - b) / (1.0 + abs(b))


def pairing_defect(cur: ZerothOrderCurrent, t: float, x: float,
                   r: np.ndarray) -> float:
    """
    Largest relative mismatch at (t, x, r) between the coded rho, sigma and
    characteristic and their exact symbolic counterparts, between sigma_k and
    V^k rho_k, and in the explicit part rho_t + sigma_x.
    """
    r = np.asarray(r, dtype=float)
    values = [float(v) for v in cur.pairing(t, x, *r, *cur.psi_jet(r))]
    rho, sigma = values[0], values[1]
    rho_r, sigma_r = values[2:5], values[5:8]
    rho_t, sigma_x = values[8], values[9]
    V = char_speeds(r[0], r[1])
    char = cur.characteristic(t, x, r)
    worst = max(_relative(cur.rho(t, x, r), rho),
                _relative(cur.sigma(t, x, r), sigma))
    for k in range(3):
        worst = max(worst,
                    _relative(float(char[k]), rho_r[k]),
                    _relative(sigma_r[k], V[k] * rho_r[k]))
    return max(worst, abs(rho_t + sigma_x) / (1.0 + abs(rho_t)))


def pairing_check(cur: ZerothOrderCurrent, rng: np.random.Generator,
                  samples: int = 100) -> CheckResult:
    worst = 0.0
    for _ in range(samples):
        t, x = rng.uniform(-1.0, 1.0, 2)
        r = rng.uniform(-1.0, 1.0, 3)
        worst = max(worst, pairing_defect(cur, float(t), float(x), r))
    return tolerance_check(f'pairing/{cur.NAME}', worst, Tolerance.PAIRING,
                           samples=samples)


def omega_chain_residual(sampler: SolutionSampler, iota: int, t: float,
                         x: float, h: float) -> float:
    """d_t omega + (r1 + r2) d_x omega at (t, x), all by step h."""
    r = sampler.state(t, x)
    om_t = (sampler.omega(iota, t + h, x, h)
            - sampler.omega(iota, t - h, x, h)) / (2.0 * h)
    om_x = (sampler.omega(iota, t, x + h, h)
            - sampler.omega(iota, t, x - h, h)) / (2.0 * h)
    return float(om_t + (r[0] + r[1]) * om_x)


def omega_chain_check(sol: ExactSolution, iota: int, window: Window,
                      n: int = 4, steps: Sequence[float] = FiniteDifference.CHAIN,
                      threads: Optional[int] = None) -> CheckResult:
    anchors = list(_anchors(sol, window, n, threads))
    errors = [
        max(abs(omega_chain_residual(p, iota, t, x, h)) for t, x, p in anchors)
        for h in steps
    ]
    return order_check(f'omega-chain/{sol.FAMILY}/{iota}', steps, errors,
                       points=n * n)


def weights_check() -> CheckResult:
    nonzero = [e for e in weight_identities() if e != 0]
    return CheckResult('conservation/weights', float(len(nonzero)), 0.0,
                       not nonzero, 'exact')
