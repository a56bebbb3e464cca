"""
Catalogs of the free functions that appear in the solution families:
Theta(u) for the singular family and strictly monotone maps used as W, F
and as the arbitrary handles of the reduction families.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from src.util.errors import DomainError


class ThetaFn(ABC):

    @abstractmethod
    def derivatives(self, u) -> Tuple:
        """(Theta, Theta_u, Theta_uu) at u."""

    @abstractmethod
    def describe(self) -> Dict:
        pass


class PolyTheta(ThetaFn):

    def __init__(self, coefs):
        self.coefs = tuple(float(c) for c in coefs) or (0.0,)
        self._p = Polynomial(self.coefs)
        self._dp = self._p.deriv(1)
        self._ddp = self._p.deriv(2)

    def derivatives(self, u):
        return self._p(u), self._dp(u), self._ddp(u)

    def describe(self):
        return {'kind': 'poly', 'coefs': list(self.coefs)}


@dataclass(frozen=True)
class ExpTheta(ThetaFn):
    """Theta = coef * exp(alpha * u)."""
    alpha: float
    coef: float = 1.0

    def derivatives(self, u):
        e = self.coef * np.exp(self.alpha * np.asarray(u, dtype=float))
        return e, self.alpha * e, self.alpha * self.alpha * e

    def describe(self):
        return {'kind': 'exp', 'alpha': self.alpha, 'coef': self.coef}


class MonotoneFn(ABC):

    @abstractmethod
    def __call__(self, w):
        pass

    @abstractmethod
    def derivative(self, w):
        pass

    @abstractmethod
    def inverse(self, y):
        pass

    @abstractmethod
    def describe(self) -> Dict:
        pass


@dataclass(frozen=True)
class IdentityFn(MonotoneFn):

    def __call__(self, w):
        return w

    def derivative(self, w):
        return 1.0 + 0.0 * np.asarray(w, dtype=float)

    def inverse(self, y):
        return y

    def describe(self):
        return {'kind': 'identity'}


@dataclass(frozen=True)
class AffineFn(MonotoneFn):
    alpha: float
    beta: float = 0.0

    def __post_init__(self):
        if self.alpha == 0:
            raise DomainError('affine map needs a nonzero slope')

    def __call__(self, w):
        return self.alpha * w + self.beta

    def derivative(self, w):
        return self.alpha + 0.0 * np.asarray(w, dtype=float)

    def inverse(self, y):
        return (y - self.beta) / self.alpha

    def describe(self):
        return {'kind': 'affine', 'alpha': self.alpha, 'beta': self.beta}


@dataclass(frozen=True)
class ExpFn(MonotoneFn):

    def __call__(self, w):
        return np.exp(w)

    def derivative(self, w):
        return np.exp(w)

    def inverse(self, y):
        if np.any(np.asarray(y) <= 0):
            raise DomainError(f'exp has no preimage of {y}')
        return np.log(y)

    def describe(self):
        return {'kind': 'exp'}


@dataclass(frozen=True)
class TanhFn(MonotoneFn):

    def __call__(self, w):
        return np.tanh(w)

    def derivative(self, w):
        return 1.0 / np.cosh(w) ** 2

    def inverse(self, y):
        if np.any(np.abs(np.asarray(y)) >= 1):
            raise DomainError(f'tanh has no preimage of {y}')
        return np.arctanh(y)

    def describe(self):
        return {'kind': 'tanh'}


@dataclass(frozen=True)
class OddCubicFn(MonotoneFn):
    """a*w**3 + b*w with a > 0, b >= 0."""
    a: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        if self.a <= 0 or self.b < 0:
            raise DomainError('odd cubic needs a > 0 and b >= 0')

    def __call__(self, w):
        return self.a * w ** 3 + self.b * w

    def derivative(self, w):
        return 3.0 * self.a * np.asarray(w, dtype=float) ** 2 + self.b

    def inverse(self, y):
        # Cardano; p > 0 leaves a single real root
        p = self.b / self.a
        q = np.asarray(y, dtype=float) / self.a
        root = np.sqrt(q * q / 4.0 + p ** 3 / 27.0)
        return np.cbrt(q / 2.0 + root) + np.cbrt(q / 2.0 - root)

    def describe(self):
        return {'kind': 'cubic', 'a': self.a, 'b': self.b}


@dataclass(frozen=True)
class NegatedInverseFn(MonotoneFn):
    """F = -W^{-1}."""
    base: MonotoneFn

    def __call__(self, y):
        return -self.base.inverse(y)

    def derivative(self, y):
        return -1.0 / self.base.derivative(self.base.inverse(y))

    def inverse(self, z):
        return self.base(-np.asarray(z))

    def describe(self):
        return {'kind': 'negated_inverse', 'base': self.base.describe()}


@dataclass(frozen=True)
class ComposedFn(MonotoneFn):
    """outer(inner(w))."""
    outer: MonotoneFn
    inner: MonotoneFn

    def __call__(self, w):
        return self.outer(self.inner(w))

    def derivative(self, w):
        return self.outer.derivative(self.inner(w)) * self.inner.derivative(w)

    def inverse(self, y):
        return self.inner.inverse(self.outer.inverse(y))

    def describe(self):
        return {'kind': 'composed', 'outer': self.outer.describe(),
                'inner': self.inner.describe()}
