"""
Automorphisms of the radical r = <D, G, Pt, Px, Pv> and the adjoint action
of the elementary point symmetry transformations on g.
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Union

import numpy as np
import sympy as sp

from src.algebra.lie_algebra import (
    BASIS, GVector, Subspace, W_SYMBOL, _poly, basis_bracket, commutator
)
from src.config import Algebra
from src.util.errors import (
    DomainError, InvalidAutomorphismError, UnsupportedTransportError
)

# (row, col) entries that vanish for every automorphism matrix
_ZERO_ENTRIES = (
    (0, 1), (0, 2), (0, 3), (0, 4),
    (1, 0), (1, 2), (1, 3), (1, 4),
    (2, 1), (2, 3), (2, 4),
    (3, 4),
    (4, 2), (4, 3),
)


class AutMatrix:
    """
    Automorphism of r in the basis (D, G, Pt, Px, Pv). Column j holds the
    image of the j-th basis element.
    """

    PARAMS = ('b22', 'b31', 'b33', 'b41', 'b43', 'b51', 'b52', 'b55')

    def __init__(self, matrix: sp.Matrix):
        self.matrix = sp.Matrix(matrix).applyfunc(sp.Rational)
        self._validate()

    @classmethod
    def from_params(cls, b22=1, b31=0, b33=1, b41=0, b43=0, b51=0, b52=0,
                    b55=1) -> 'AutMatrix':
        b22, b31, b33, b41, b43, b51, b52, b55 = (
            sp.Rational(b) for b in (b22, b31, b33, b41, b43, b51, b52, b55)
        )
        return cls(sp.Matrix([
            [1, 0, 0, 0, 0],
            [0, b22, 0, 0, 0],
            [b31, 0, b33, 0, 0],
            [b41, b31 * b22, b43, b22 * b33, 0],
            [b51, b52, 0, 0, b55],
        ]))

    @classmethod
    def identity(cls) -> 'AutMatrix':
        return cls.from_params()

    def _validate(self):
        m = self.matrix
        if m.shape != (5, 5):
            raise InvalidAutomorphismError(f'expected a 5x5 matrix, got {m.shape}')
        if m[0, 0] != 1:
            raise InvalidAutomorphismError('b11 must equal 1')
        for i, j in _ZERO_ENTRIES:
            if m[i, j] != 0:
                raise InvalidAutomorphismError(f'entry ({i + 1},{j + 1}) must vanish')
        if m[3, 1] != m[2, 0] * m[1, 1]:
            raise InvalidAutomorphismError('b42 must equal b31*b22')
        if m[3, 3] != m[1, 1] * m[2, 2]:
            raise InvalidAutomorphismError('b44 must equal b22*b33')
        if m[1, 1] * m[2, 2] * m[4, 4] == 0:
            raise InvalidAutomorphismError('b22*b33*b55 must not vanish')

    @property
    def params(self) -> dict:
        m = self.matrix
        return {'b22': m[1, 1], 'b31': m[2, 0], 'b33': m[2, 2],
                'b41': m[3, 0], 'b43': m[3, 2], 'b51': m[4, 0],
                'b52': m[4, 1], 'b55': m[4, 4]}

    def apply(self, X: GVector) -> GVector:
        """Image of X; the W-part is carried by the identity."""
        image = self.matrix * sp.Matrix(X.coeffs)
        return GVector(list(image), X.omega)

    def __mul__(self, other: 'AutMatrix') -> 'AutMatrix':
        return AutMatrix(self.matrix * other.matrix)

    def __eq__(self, other) -> bool:
        return isinstance(other, AutMatrix) and self.matrix == other.matrix

    def __repr__(self) -> str:
        return f'AutMatrix({self.params})'


def aut_preserves_brackets(m: AutMatrix) -> bool:
    images = [m.apply(GVector.basis(name)) for name in BASIS]
    for i in range(5):
        for j in range(i + 1, 5):
            value = GVector()
            for k, c in basis_bracket(i, j).items():
                value = value + c * GVector.basis(BASIS[k])
            if m.apply(value) != commutator(images[i], images[j]):
                return False
    return True


def aut_group_closed(m1: AutMatrix, m2: AutMatrix) -> AutMatrix:
    """Product m1*m2; raises InvalidAutomorphismError if it leaves the family."""
    return m1 * m2


def aut_inverse(m: AutMatrix) -> AutMatrix:
    return AutMatrix(m.matrix.inv())


def _random_rational(rng: np.random.Generator, nonzero: bool = False):
    while True:
        value = sp.Rational(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
        if value != 0 or not nonzero:
            return value


def random_aut(rng: np.random.Generator) -> AutMatrix:
    values = {}
    for name in AutMatrix.PARAMS:
        values[name] = _random_rational(rng, nonzero=name in ('b22', 'b33', 'b55'))
    return AutMatrix.from_params(**values)


def automorphisms_hold(rng: np.random.Generator,
                       samples: int = Algebra.AUTOMORPHISMS) -> bool:
    """Random members of the family preserve every bracket of r."""
    return all(aut_preserves_brackets(random_aut(rng)) for _ in range(samples))


def preserves_subspace(m: AutMatrix, s: Subspace) -> bool:
    """Finite-part invariance of s under m."""
    return all(s.contains(m.apply(g)) for g in s.generators)


@dataclass(frozen=True)
class AffineW:
    """w -> alpha*w + beta."""
    alpha: sp.Rational
    beta: sp.Rational = sp.Integer(0)

    def __post_init__(self):
        if self.alpha == 0:
            raise DomainError('W-reparametrization needs a nonzero slope')

    def transport(self, omega: sp.Poly) -> sp.Poly:
        # Omega~(W(w)) = W_w(w) Omega(w)
        pre = (W_SYMBOL - self.beta) / self.alpha
        return _poly(self.alpha * omega.as_expr().subs(W_SYMBOL, pre))

    def __str__(self):
        return f'W(w) = {self.alpha}*w + {self.beta}'


@dataclass(frozen=True)
class NormalizingW:
    """
    W(w) = target * integral(dw / omega), defined where omega does not vanish.
    It sends W(omega) to W(target) and is only transported on multiples of omega.
    """
    omega: sp.Poly
    target: sp.Rational = sp.Integer(1)

    def __post_init__(self):
        if self.omega.is_zero or self.target == 0:
            raise DomainError('normalizing map needs nonzero omega and target')

    def transport(self, omega: sp.Poly) -> sp.Poly:
        if omega.is_zero:
            return omega
        ratio = sp.cancel(omega.as_expr() / self.omega.as_expr())
        if not ratio.is_Rational:
            raise UnsupportedTransportError(
                f'cannot transport W({omega.as_expr()}) along {self}'
            )
        return _poly(ratio * self.target)

    def __str__(self):
        return f'W(w) = {self.target}*integral(dw/({self.omega.as_expr()}))'


TAGS = ('Pt-shift', 'Px-shift', 'Pv-shift', 'dilation', 'galilean', 'W-reparam')


@dataclass(frozen=True)
class GroupElement:
    tag: str
    param: Union[sp.Rational, AffineW, NormalizingW]

    def __post_init__(self):
        if self.tag not in TAGS:
            raise DomainError(f'unknown group element {self.tag!r}')
        if self.tag == 'W-reparam':
            if not isinstance(self.param, (AffineW, NormalizingW)):
                raise DomainError('W-reparam needs an AffineW or NormalizingW')
        else:
            object.__setattr__(self, 'param', sp.Rational(self.param))
            if self.tag == 'dilation' and self.param == 0:
                raise DomainError('dilation parameter must not vanish')

    @classmethod
    def pt_shift(cls, T0) -> 'GroupElement':
        return cls('Pt-shift', T0)

    @classmethod
    def px_shift(cls, X0) -> 'GroupElement':
        return cls('Px-shift', X0)

    @classmethod
    def pv_shift(cls, V0) -> 'GroupElement':
        return cls('Pv-shift', V0)

    @classmethod
    def dilation(cls, T1) -> 'GroupElement':
        return cls('dilation', T1)

    @classmethod
    def galilean(cls, U0) -> 'GroupElement':
        return cls('galilean', U0)

    @classmethod
    def w_reparam(cls, W) -> 'GroupElement':
        return cls('W-reparam', W)

    def __str__(self):
        return f'{self.tag}({self.param})'


def adjoint_push(g: GroupElement, X: GVector) -> GVector:
    """Pushforward of X by the elementary transformation g."""
    aD, aG, aPt, aPx, aPv = X.coeffs
    p = g.param
    if g.tag == 'Pt-shift':
        return GVector((aD, aG, aPt - p * aD, aPx - p * aG, aPv), X.omega)
    if g.tag == 'Px-shift':
        return GVector((aD, aG, aPt, aPx - p * aD, aPv), X.omega)
    if g.tag == 'Pv-shift':
        return X
    if g.tag == 'dilation':
        return GVector((aD, aG, p * aPt, p * aPx, aPv), X.omega)
    if g.tag == 'galilean':
        return GVector((aD, aG, aPt, aPx + p * aPt, aPv), X.omega)
    return GVector(X.coeffs, p.transport(X.omega))


def push_all(witness: Iterable[GroupElement], X: GVector) -> GVector:
    for g in witness:
        X = adjoint_push(g, X)
    return X


def push_subspace(witness: Iterable[GroupElement],
                  s: Subspace) -> Subspace:
    witness = list(witness)
    return Subspace([push_all(witness, g) for g in s.generators], s.w_full)


def megaideal_invariance(subspaces: List[Subspace], samples: int,
                         rng: Optional[np.random.Generator] = None) -> List[bool]:
    """Per subspace: invariant under every sampled automorphism."""
    rng = rng or np.random.default_rng(0)
    auts = [random_aut(rng) for _ in range(samples)]
    return [all(preserves_subspace(m, s) for m in auts) for s in subspaces]
