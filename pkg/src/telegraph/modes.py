"""
Closed-form solutions of the telegraph equation Phi_vv + Phi_v = Phi_uu.

Every mode is evaluated together with its partials through order two, and
the catalog is closed under differentiation, so derivatives of a
TelegraphFn are again TelegraphFns.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, NamedTuple, Tuple

import numpy as np

from src.util.errors import DomainError

DISPERSION_TOL = 1e-14


class PhiPartials(NamedTuple):
    phi: float
    phi_u: float
    phi_v: float
    phi_uu: float
    phi_uv: float
    phi_vv: float


class RiemannPartials(NamedTuple):
    f: float
    f1: float
    f2: float
    f11: float
    f12: float
    f22: float


def dispersion_mu(lam: float, branch: str = '+') -> float:
    """Root of mu**2 + mu = lam**2 for the ansatz exp(lam*u + mu*v)."""
    root = np.sqrt(1.0 + 4.0 * lam * lam)
    if branch == '+':
        return float((-1.0 + root) / 2.0)
    if branch == '-':
        return float((-1.0 - root) / 2.0)
    raise DomainError(f"branch must be '+' or '-', got {branch!r}")


def damped_mu(k: float, branch: str = '+') -> float:
    """Root of mu**2 + mu + k**2 = 0, real for |k| <= 1/2."""
    disc = 1.0 - 4.0 * k * k
    if disc < 0:
        raise DomainError(f'damped mode needs |k| <= 1/2, got k={k}')
    if branch == '+':
        return float((-1.0 + np.sqrt(disc)) / 2.0)
    if branch == '-':
        return float((-1.0 - np.sqrt(disc)) / 2.0)
    raise DomainError(f"branch must be '+' or '-', got {branch!r}")


class Mode(ABC):

    @abstractmethod
    def partials(self, u, v) -> PhiPartials:
        pass

    @abstractmethod
    def diff_u(self) -> 'TelegraphFn':
        pass

    @abstractmethod
    def diff_v(self) -> 'TelegraphFn':
        pass

    @abstractmethod
    def describe(self) -> Dict:
        pass


@dataclass(frozen=True)
class ConstMode(Mode):

    def partials(self, u, v):
        one = np.ones_like(np.asarray(u, dtype=float) + np.asarray(v))
        zero = 0.0 * one
        return PhiPartials(one, zero, zero, zero, zero, zero)

    def diff_u(self):
        return TelegraphFn(())

    def diff_v(self):
        return TelegraphFn(())

    def describe(self):
        return {'mode': 'const'}


@dataclass(frozen=True)
class LinUMode(Mode):

    def partials(self, u, v):
        u = np.asarray(u, dtype=float) + 0.0 * np.asarray(v)
        zero = 0.0 * u
        return PhiPartials(u, zero + 1.0, zero, zero, zero, zero)

    def diff_u(self):
        return TelegraphFn.single(ConstMode())

    def diff_v(self):
        return TelegraphFn(())

    def describe(self):
        return {'mode': 'lin_u'}


@dataclass(frozen=True)
class ExpVMode(Mode):
    """Phi = exp(-v)."""

    def partials(self, u, v):
        e = np.exp(-(np.asarray(v, dtype=float) + 0.0 * np.asarray(u)))
        zero = 0.0 * e
        return PhiPartials(e, zero, -e, zero, zero, e)

    def diff_u(self):
        return TelegraphFn(())

    def diff_v(self):
        return TelegraphFn.single(self, -1.0)

    def describe(self):
        return {'mode': 'exp_v'}


@dataclass(frozen=True)
class QuadMode(Mode):
    """Phi = u**2 + 2v."""

    def partials(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        zero = 0.0 * (u + v)
        return PhiPartials(u * u + 2.0 * v, 2.0 * u + zero, zero + 2.0,
                           zero + 2.0, zero, zero)

    def diff_u(self):
        return TelegraphFn.single(LinUMode(), 2.0)

    def diff_v(self):
        return TelegraphFn.single(ConstMode(), 2.0)

    def describe(self):
        return {'mode': 'quad'}


@dataclass(frozen=True)
class ExpMode(Mode):
    """Phi = exp(lam*u + mu*v) with mu**2 + mu = lam**2."""
    lam: float
    mu: float

    def __post_init__(self):
        gap = self.mu * self.mu + self.mu - self.lam * self.lam
        if abs(gap) > DISPERSION_TOL * max(1.0, self.lam * self.lam):
            raise DomainError(
                f'ExpMode({self.lam}, {self.mu}) violates mu^2 + mu = lam^2'
            )

    @classmethod
    def from_branch(cls, lam: float, branch: str = '+') -> 'ExpMode':
        return cls(lam, dispersion_mu(lam, branch))

    def partials(self, u, v):
        lam, mu = self.lam, self.mu
        e = np.exp(lam * np.asarray(u, dtype=float) + mu * np.asarray(v))
        return PhiPartials(e, lam * e, mu * e, lam * lam * e, lam * mu * e,
                           mu * mu * e)

    def diff_u(self):
        return TelegraphFn.single(self, self.lam)

    def diff_v(self):
        return TelegraphFn.single(self, self.mu)

    def describe(self):
        return {'mode': 'exp', 'lambda': self.lam, 'mu': self.mu}


@dataclass(frozen=True)
class DampedMode(Mode):
    """Phi = exp(mu*v) cos(k*u + phase) with mu**2 + mu + k**2 = 0."""
    k: float
    mu: float
    phase: float = 0.0

    def __post_init__(self):
        if abs(self.k) > 0.5:
            raise DomainError(f'damped mode needs |k| <= 1/2, got k={self.k}')
        gap = self.mu * self.mu + self.mu + self.k * self.k
        if abs(gap) > DISPERSION_TOL:
            raise DomainError(
                f'DampedMode({self.k}, {self.mu}) violates mu^2 + mu + k^2 = 0'
            )

    @classmethod
    def from_branch(cls, k: float, branch: str = '+',
                    phase: float = 0.0) -> 'DampedMode':
        return cls(k, damped_mu(k, branch), phase)

    def partials(self, u, v):
        k, mu = self.k, self.mu
        e = np.exp(mu * np.asarray(v, dtype=float))
        arg = k * np.asarray(u, dtype=float) + self.phase
        c, s = e * np.cos(arg), e * np.sin(arg)
        return PhiPartials(c, -k * s, mu * c, -k * k * c, -k * mu * s,
                           mu * mu * c)

    def diff_u(self):
        shifted = DampedMode(self.k, self.mu, self.phase + np.pi / 2.0)
        return TelegraphFn.single(shifted, self.k)

    def diff_v(self):
        return TelegraphFn.single(self, self.mu)

    def describe(self):
        return {'mode': 'damped', 'k': self.k, 'mu': self.mu,
                'phase': self.phase}


@dataclass(frozen=True)
class TelegraphFn:
    """Finite superposition sum(coef * mode)."""
    terms: Tuple[Tuple[float, Mode], ...]

    @classmethod
    def single(cls, mode: Mode, coef: float = 1.0) -> 'TelegraphFn':
        return cls(((float(coef), mode),))

    def partials(self, u, v) -> PhiPartials:
        total = np.zeros((6,) + np.shape(np.asarray(u) + np.asarray(v)))
        for coef, mode in self.terms:
            total = total + coef * np.asarray(mode.partials(u, v))
        return PhiPartials(*total)

    def residual(self, u, v):
        p = self.partials(u, v)
        return p.phi_vv + p.phi_v - p.phi_uu

    def scaled(self, c: float) -> 'TelegraphFn':
        return TelegraphFn(tuple((c * coef, mode) for coef, mode in self.terms))

    def __add__(self, other: 'TelegraphFn') -> 'TelegraphFn':
        return TelegraphFn(self.terms + other.terms)

    def __sub__(self, other: 'TelegraphFn') -> 'TelegraphFn':
        return self + other.scaled(-1.0)

    def diff_u(self) -> 'TelegraphFn':
        out = TelegraphFn(())
        for coef, mode in self.terms:
            out = out + mode.diff_u().scaled(coef)
        return out

    def diff_v(self) -> 'TelegraphFn':
        out = TelegraphFn(())
        for coef, mode in self.terms:
            out = out + mode.diff_v().scaled(coef)
        return out

    def describe(self):
        return [dict(mode.describe(), coef=coef) for coef, mode in self.terms]


def klein_gordon_residual(f: TelegraphFn, u, v):
    """p_uu - p_vv + p/4 for p = exp(v/2) Phi."""
    p = f.partials(u, v)
    return np.exp(np.asarray(v) / 2.0) * (p.phi_uu - p.phi_v - p.phi_vv)


class RiemannForm:
    """
    Phi_hat(r1, r2) = Phi(r1 + r2, r1 - r2), a solution of
    2 Phi_12 = Phi_1 - Phi_2. With swapped=True the arguments are exchanged,
    which gives solutions of the adjoint equation 2 Psi_12 = Psi_2 - Psi_1.
    """

    def __init__(self, f: TelegraphFn, swapped: bool = False):
        self.f = f
        self.swapped = swapped

    def _direct(self, r1, r2) -> RiemannPartials:
        p = self.f.partials(r1 + r2, r1 - r2)
        return RiemannPartials(
            p.phi,
            p.phi_u + p.phi_v,
            p.phi_u - p.phi_v,
            p.phi_uu + 2.0 * p.phi_uv + p.phi_vv,
            p.phi_uu - p.phi_vv,
            p.phi_uu - 2.0 * p.phi_uv + p.phi_vv,
        )

    def partials(self, r1, r2) -> RiemannPartials:
        r1 = np.asarray(r1, dtype=float)
        r2 = np.asarray(r2, dtype=float)
        if not self.swapped:
            return self._direct(r1, r2)
        d = self._direct(r2, r1)
        return RiemannPartials(d.f, d.f2, d.f1, d.f22, d.f12, d.f11)

    def residual(self, r1, r2):
        p = self.partials(r1, r2)
        if self.swapped:
            return 2.0 * p.f12 - p.f2 + p.f1
        return 2.0 * p.f12 - p.f1 + p.f2

    def scaled(self, c: float) -> 'RiemannForm':
        return RiemannForm(self.f.scaled(c), self.swapped)

    def __add__(self, other: 'RiemannForm') -> 'RiemannForm':
        if other.swapped != self.swapped:
            raise DomainError('cannot add direct and adjoint forms')
        return RiemannForm(self.f + other.f, self.swapped)

    def diff1(self) -> 'RiemannForm':
        if self.swapped:
            return RiemannForm(self.f.diff_u() - self.f.diff_v(), True)
        return RiemannForm(self.f.diff_u() + self.f.diff_v())

    def diff2(self) -> 'RiemannForm':
        if self.swapped:
            return RiemannForm(self.f.diff_u() + self.f.diff_v(), True)
        return RiemannForm(self.f.diff_u() - self.f.diff_v())


def to_riemann_form(f: TelegraphFn) -> RiemannForm:
    return RiemannForm(f)


def adjoint_form(f: TelegraphFn) -> RiemannForm:
    return RiemannForm(f, swapped=True)
