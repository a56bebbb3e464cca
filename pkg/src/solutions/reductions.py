"""
Solutions obtained by Lie reduction with one-dimensional subalgebras and the
partially invariant solutions built on the first of them.

Every family returns the fields together with their first derivatives in
closed form; parametric families invert omega(phi) on a seed interval that
is free of critical points, so the branch cannot jump.
"""

from abc import abstractmethod
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from src.model.charts import UVWState
from src.model.residuals import UVWJet
from src.solutions.base import ExactSolution
from src.telegraph.functions import IdentityFn, MonotoneFn
from src.util.errors import DomainError

ROOT_TOL = 1e-10
QUAD_TOL = 1e-13

Fields = Tuple[Sequence[float], Sequence[float], Sequence[float]]


def _check_interval(interval: Tuple[float, float],
                    critical: Iterable[float], family: str):
    lo, hi = interval
    if not lo < hi:
        raise DomainError(f'{family}: seed interval {interval} is empty')
    for c in critical:
        if lo <= c <= hi:
            raise DomainError(
                f'{family}: seed interval {interval} contains the critical '
                f'point phi = {c:.6g}'
            )


def _invert(omega_of, target: float, interval: Tuple[float, float],
            family: str) -> float:
    lo, hi = interval
    f_lo, f_hi = omega_of(lo) - target, omega_of(hi) - target
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0:
        raise DomainError(
            f'{family}: omega = {target:.6g} is outside the image of the '
            f'seed interval {interval}'
        )
    return brentq(lambda p: omega_of(p) - target, lo, hi, xtol=1e-15,
                  maxiter=200)


class ReductionSolution(ExactSolution):

    FAMILY = 'reduction'
    ANALYTIC_JET = True
    TAG = ''
    LOG_TIME = False

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.psi: MonotoneFn = kwargs.get('psi') or IdentityFn()

    @abstractmethod
    def _fields(self, t: float, x: float) -> Fields:
        """((u, v, w), (u_t, v_t, w_t), (u_x, v_x, w_x)) before applying W."""

    @abstractmethod
    def params(self) -> Dict:
        pass

    def _check_time(self, t):
        if self.LOG_TIME and not t > 0:
            raise DomainError(f'{self.TAG} is defined for t > 0, got t = {t}')

    def jet(self, t, x, guess=None):
        self._check_time(t)
        (u, v, w), st, sx = self._fields(t, x)
        dW = float(self.W.derivative(w))
        state = UVWState(float(u), float(v), float(self.W(w)))
        return UVWJet(t, x, state,
                      np.array([sx[0], sx[1], dW * sx[2]], dtype=float),
                      np.array([st[0], st[1], dW * st[2]], dtype=float))

    def evaluate(self, t, x, guess=None):
        return self.jet(t, x).state

    def describe(self):
        return dict(super().describe(), tag=self.TAG, params=self.params(),
                    psi=self.psi.describe())


def _quadratic_root_ok(mu, a, b, family):
    if abs(mu * mu + a * mu - b - 1.0) > ROOT_TOL:
        raise DomainError(f'{family}: mu = {mu} is not a root of '
                          f'mu^2 + a mu - b - 1')


class Reduction1A(ReductionSolution):
    """
    u = mu + x/t + a,  v = -(a + mu) omega + c2 + b ln t,
    w = -delta1 omega / mu + c3 + delta1 ln t  (mu != 0)
    w = psi(omega)                             (mu = 0, b = -1, delta1 = 0)
    with omega = x/t - a ln t and mu^2 + a mu - b - 1 = 0.
    """

    TAG = '1A'
    LOG_TIME = True

    def __init__(self, a=0.0, b=-1.0, mu=0.0, delta1=0.0, c2=0.0, c3=0.0,
                 *args, **kwargs):
        super().__init__(*args, **kwargs)
        _quadratic_root_ok(mu, a, b, self.TAG)
        if mu == 0 and (abs(b + 1.0) > ROOT_TOL or delta1 != 0):
            raise DomainError('1A with mu = 0 needs b = -1 and delta1 = 0')
        self.a, self.b, self.mu = a, b, mu
        self.delta1, self.c2, self.c3 = delta1, c2, c3

    def params(self):
        return {'a': self.a, 'b': self.b, 'mu': self.mu,
                'delta1': self.delta1, 'c2': self.c2, 'c3': self.c3}

    def _fields(self, t, x):
        a, b, mu, d1 = self.a, self.b, self.mu, self.delta1
        omega = x / t - a * np.log(t)
        om_t, om_x = -x / t ** 2 - a / t, 1.0 / t
        u = mu + x / t + a
        v = -(a + mu) * omega + self.c2 + b * np.log(t)
        if mu != 0:
            w = -d1 * omega / mu + self.c3 + d1 * np.log(t)
            w_t, w_x = -d1 * om_t / mu + d1 / t, -d1 * om_x / mu
        else:
            dpsi = self.psi.derivative(omega)
            w = self.psi(omega)
            w_t, w_x = dpsi * om_t, dpsi * om_x
        return ((u, v, w),
                (-x / t ** 2, -(a + mu) * om_t + b / t, w_t),
                (1.0 / t, -(a + mu) * om_x, w_x))


class _ParametricFamily1(ReductionSolution):
    """Shared parametric solution of the general case of family 1."""

    LOG_TIME = True

    def __init__(self, a=0.0, b=0.0, c1=0.0, c2=0.0,
                 interval=(1.5, 3.0), anchor=None, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.a, self.b, self.c1, self.c2 = a, b, c1, c2
        self.interval = tuple(interval)
        self.anchor = anchor if anchor is not None else 0.5 * sum(interval)
        roots = np.roots([1.0, a, -b - 1.0])
        critical = [-1.0, 0.0, 1.0] + [r.real for r in roots
                                       if abs(r.imag) < ROOT_TOL]
        _check_interval(self.interval, critical, self.TAG)

    def _poly(self, phi):
        return phi * phi + self.a * phi - self.b - 1.0

    def _integral(self, integrand, phi):
        value, _ = quad(integrand, self.anchor, phi, epsabs=QUAD_TOL,
                        epsrel=QUAD_TOL, limit=200)
        return value

    def omega_of(self, phi):
        return self.c1 + self._integral(
            lambda s: (1.0 - s * s) / self._poly(s), phi)

    def chi_of(self, phi):
        return self.c2 + self._integral(
            lambda s: (self.b * s - self.a) / self._poly(s), phi)

    def psi_hat_of(self, phi):
        return self._integral(
            lambda s: (1.0 - s * s) / (s * self._poly(s)), phi)

    def _base(self, t, x):
        """phi, chi and their omega-derivatives with the ansatz for (u, v)."""
        a, b = self.a, self.b
        omega = x / t - a * np.log(t)
        om_t, om_x = -x / t ** 2 - a / t, 1.0 / t
        phi = _invert(self.omega_of, omega, self.interval, self.TAG)
        chi = self.chi_of(phi)
        d_phi = self._poly(phi) / (1.0 - phi * phi)
        d_chi = (b * phi - a) / (1.0 - phi * phi)
        u = phi + x / t + a
        v = chi + b * np.log(t)
        u_t, u_x = d_phi * om_t - x / t ** 2, (d_phi + 1.0) / t
        v_t, v_x = d_chi * om_t + b / t, d_chi * om_x
        return phi, omega, (om_t, om_x), (u, v), (u_t, v_t), (u_x, v_x)

    def params(self):
        return {'a': self.a, 'b': self.b, 'c1': self.c1, 'c2': self.c2,
                'interval': list(self.interval), 'anchor': self.anchor}


class Reduction1B(_ParametricFamily1):
    """
    u = phi + x/t + a, v = chi + b ln t, w = -delta1 psi_hat + c3 + delta1 ln t
    with omega, chi and psi_hat given by quadratures in phi.
    """

    TAG = '1B'

    def __init__(self, *args, **kwargs):
        self.delta1 = kwargs.pop('delta1', 0.0)
        self.c3 = kwargs.pop('c3', 0.0)
        super().__init__(*args, **kwargs)

    def params(self):
        return dict(super().params(), delta1=self.delta1, c3=self.c3)

    def _fields(self, t, x):
        phi, _, (om_t, om_x), (u, v), (u_t, v_t), (u_x, v_x) = self._base(t, x)
        d1 = self.delta1
        w = -d1 * self.psi_hat_of(phi) + self.c3 + d1 * np.log(t)
        d_psi = -d1 / phi
        return ((u, v, w), (u_t, v_t, d_psi * om_t + d1 / t),
                (u_x, v_x, d_psi * om_x))


class PartialInvariant5B(_ParametricFamily1):
    """(u, v) as in 1B and w = psi(ln t - psi_hat(phi))."""

    TAG = 'PI-5B'

    def _fields(self, t, x):
        phi, _, (om_t, om_x), (u, v), (u_t, v_t), (u_x, v_x) = self._base(t, x)
        varpi = np.log(t) - self.psi_hat_of(phi)
        dpsi = self.psi.derivative(varpi)
        return ((u, v, self.psi(varpi)),
                (u_t, v_t, dpsi * (1.0 / t - om_t / phi)),
                (u_x, v_x, dpsi * (-om_x / phi)))


class Reduction2A(ReductionSolution):
    """
    u = phi + t, v = chi + b t, w = psi + delta1 t, omega = x - t^2/2, with
      omega = -phi^2/2 - b phi - (b^2 - 1) ln|phi - b| + c1,
      chi   = b phi + (b^2 - 1) ln|phi - b| + c2,
      psi   = delta1 (phi + ln|phi|/b + (b^2 - 1) ln|phi - b|/b) + c3,
    and psi = delta1 (phi + 1/phi) + c3 when b = 0. The singular branch
    b = eps = +-1 has phi = eps, chi = -omega + c2, psi = -delta1 eps omega + c3.
    """

    TAG = '2A'

    def __init__(self, b=0.0, delta1=0.0, c1=0.0, c2=0.0, c3=0.0,
                 interval=(1.5, 3.0), singular=False, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.b, self.delta1 = b, delta1
        self.c1, self.c2, self.c3 = c1, c2, c3
        self.singular = singular
        self.interval = tuple(interval)
        if singular:
            if b not in (1.0, -1.0):
                raise DomainError('2A singular branch needs b = +1 or -1')
        else:
            critical = [-1.0, 1.0, b] + ([0.0] if delta1 != 0 else [])
            _check_interval(self.interval, critical, self.TAG)

    def params(self):
        return {'b': self.b, 'delta1': self.delta1, 'c1': self.c1,
                'c2': self.c2, 'c3': self.c3, 'interval': list(self.interval),
                'singular': self.singular}

    def omega_of(self, phi):
        b = self.b
        out = -phi * phi / 2.0 - b * phi + self.c1
        if b * b != 1.0:
            out -= (b * b - 1.0) * np.log(abs(phi - b))
        return out

    def _psi_of(self, phi):
        b, d1 = self.b, self.delta1
        if d1 == 0:
            return self.c3
        if b == 0:
            return d1 * (phi + 1.0 / phi) + self.c3
        out = d1 * phi + d1 / b * np.log(abs(phi))
        if b * b != 1.0:
            out += d1 / b * (b * b - 1.0) * np.log(abs(phi - b))
        return out + self.c3

    def _fields(self, t, x):
        b, d1 = self.b, self.delta1
        omega = x - t * t / 2.0
        om_t, om_x = -t, 1.0
        if self.singular:
            phi, chi, psi = b, -omega + self.c2, -d1 * b * omega + self.c3
            d_phi, d_chi, d_psi = 0.0, -1.0, -d1 * b
        else:
            phi = _invert(self.omega_of, omega, self.interval, self.TAG)
            chi = b * phi + self.c2
            if b * b != 1.0:
                chi += (b * b - 1.0) * np.log(abs(phi - b))
            psi = self._psi_of(phi)
            d_phi = (phi - b) / (1.0 - phi * phi)
            d_chi = (b * phi - 1.0) / (1.0 - phi * phi)
            d_psi = -d1 / phi
        return ((phi + t, chi + b * t, psi + d1 * t),
                (d_phi * om_t + 1.0, d_chi * om_t + b, d_psi * om_t + d1),
                (d_phi * om_x, d_chi * om_x, d_psi * om_x))


class Reduction2B(ReductionSolution):
    """
    u = phi + x/t, v = chi + b x/t, w = psi + delta1 x/t with omega = t and
      phi = c1/t - b, chi = (b^2 - 1) ln t + c1 b/t + c2,
      psi = delta1 c1/t + delta1 b ln t + c3.
    The delta1 factor on c1/t follows from integrating t psi' + delta1 phi = 0.
    """

    TAG = '2B'
    LOG_TIME = True

    def __init__(self, b=0.0, delta1=0.0, c1=1.0, c2=0.0, c3=0.0,
                 *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.b, self.delta1 = b, delta1
        self.c1, self.c2, self.c3 = c1, c2, c3

    def params(self):
        return {'b': self.b, 'delta1': self.delta1, 'c1': self.c1,
                'c2': self.c2, 'c3': self.c3}

    def _fields(self, t, x):
        b, d1, c1 = self.b, self.delta1, self.c1
        lt = np.log(t)
        u = c1 / t - b + x / t
        v = (b * b - 1.0) * lt + c1 * b / t + self.c2 + b * x / t
        w = d1 * c1 / t + d1 * b * lt + self.c3 + d1 * x / t
        t2 = t * t
        return ((u, v, w),
                (-c1 / t2 - x / t2,
                 (b * b - 1.0) / t - c1 * b / t2 - b * x / t2,
                 -d1 * c1 / t2 + d1 * b / t - d1 * x / t2),
                (1.0 / t, b / t, d1 / t))


class Reduction3(ReductionSolution):
    """
    u = phi(x), v = chi(x) + delta2 t, w = psi(x) + delta1 t with
    phi^3/3 - phi = delta2 x + c1. For delta2 = 0 the constant phi0 is given
    directly; phi0 = 0 forces delta1 = 0 and leaves psi arbitrary. For
    delta2 != 0, chi = -phi^2/2 + c2 and
    psi = -(delta1/delta2)(phi^2/2 - ln|phi|) + c3.
    """

    TAG = '3'

    def __init__(self, delta1=0.0, delta2=0.0, c1=0.0, c2=0.0, c3=0.0,
                 phi0=0.0, interval=(1.5, 3.0), *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.delta1, self.delta2 = delta1, delta2
        self.c1, self.c2, self.c3 = c1, c2, c3
        self.phi0 = phi0
        self.interval = tuple(interval)
        if delta2 == 0:
            if phi0 == 0 and delta1 != 0:
                raise DomainError('3 with phi = 0 needs delta1 = 0')
        else:
            critical = [-1.0, 1.0] + ([0.0] if delta1 != 0 else [])
            _check_interval(self.interval, critical, self.TAG)

    def params(self):
        return {'delta1': self.delta1, 'delta2': self.delta2, 'c1': self.c1,
                'c2': self.c2, 'c3': self.c3, 'phi0': self.phi0,
                'interval': list(self.interval)}

    def omega_of(self, phi):
        return (phi ** 3 / 3.0 - phi - self.c1) / self.delta2

    def _fields(self, t, x):
        d1, d2 = self.delta1, self.delta2
        if d2 == 0:
            phi = self.phi0
            if phi == 0:
                dpsi = self.psi.derivative(x)
                return ((0.0, self.c2, self.psi(x)), (0.0, 0.0, 0.0),
                        (0.0, 0.0, dpsi))
            return ((phi, self.c2, -d1 * x / phi + d1 * t + self.c3),
                    (0.0, 0.0, d1), (0.0, 0.0, -d1 / phi))
        phi = _invert(self.omega_of, x, self.interval, self.TAG)
        chi = -phi * phi / 2.0 + self.c2
        psi = -(d1 / d2) * (phi * phi / 2.0 - np.log(abs(phi))) + self.c3
        d_phi = d2 / (phi * phi - 1.0)
        return ((phi, chi + d2 * t, psi + d1 * t),
                (0.0, d2, d1),
                (d_phi, -phi * d_phi, -d1 / phi if d1 != 0 else 0.0))


class PartialInvariant5A(ReductionSolution):
    """
    u = x/t + a + mu, v = -(a + mu) x/t + (b + a^2 + a mu) ln t + c2,
    w = psi(x/t - (a + mu) ln t), with mu^2 + a mu - b - 1 = 0.
    """

    TAG = 'PI-5A'
    LOG_TIME = True

    def __init__(self, a=0.0, b=0.0, mu=None, c2=0.0, *args, **kwargs):
        super().__init__(*args, **kwargs)
        if mu is None:
            disc = a * a + 4.0 * (b + 1.0)
            if disc < 0:
                raise DomainError(
                    f'{self.TAG}: mu^2 + a mu - b - 1 has no real root'
                )
            mu = (-a + np.sqrt(disc)) / 2.0
        _quadratic_root_ok(mu, a, b, self.TAG)
        self.a, self.b, self.mu, self.c2 = a, b, float(mu), c2

    def params(self):
        return {'a': self.a, 'b': self.b, 'mu': self.mu, 'c2': self.c2}

    def _fields(self, t, x):
        a, b, mu = self.a, self.b, self.mu
        k = a + mu
        varpi = x / t - k * np.log(t)
        dpsi = self.psi.derivative(varpi)
        return ((x / t + k, -k * x / t + (b + a * a + a * mu) * np.log(t)
                 + self.c2, self.psi(varpi)),
                (-x / t ** 2, k * x / t ** 2 + (b + a * a + a * mu) / t,
                 dpsi * (-x / t ** 2 - k / t)),
                (1.0 / t, -k / t, dpsi / t))


REDUCTIONS = {
    cls.TAG: cls for cls in (Reduction1A, Reduction1B, Reduction2A,
                             Reduction2B, Reduction3, PartialInvariant5A,
                             PartialInvariant5B)
}


def make_reduction(tag: str, psi: Optional[MonotoneFn] = None,
                   **params) -> ReductionSolution:
    try:
        cls = REDUCTIONS[tag]
    except KeyError:
        raise DomainError(f'unknown reduction family {tag!r}; '
                          f'expected one of {sorted(REDUCTIONS)}')
    return cls(psi=psi, **params)
