"""
Exact arithmetic in the maximal Lie invariance algebra

    g = <D, G, Pt, Px, Pv> + <W(Omega)>,

with D = t dt + x dx, G = t dx + du, Pt = dt, Px = dx, Pv = dv and
W(Omega) = Omega(w) dw. Coefficients are sympy rationals and Omega is a
polynomial in w over QQ. The nonzero brackets of the finite part are
[Pt, D] = Pt, [Px, D] = Px and [Pt, G] = Px, and
[W(O1), W(O2)] = W(O1 O2' - O2 O1').
"""

from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy as sp
from sympy.parsing.sympy_parser import (
    convert_xor, implicit_multiplication, parse_expr,
    standard_transformations
)

from src.config import Algebra
from src.util.errors import DomainError, NotSubalgebraError

W_SYMBOL = sp.Symbol('w')
BASIS = ('D', 'G', 'Pt', 'Px', 'Pv')

# [e_i, e_j] for i < j in BASIS order; the rest follows by antisymmetry
_STRUCTURE: Dict[Tuple[int, int], Dict[int, int]] = {
    (0, 2): {2: -1},   # [D, Pt] = -Pt
    (0, 3): {3: -1},   # [D, Px] = -Px
    (1, 2): {3: -1},   # [G, Pt] = -Px
}


def _poly(expr) -> sp.Poly:
    return sp.Poly(sp.sympify(expr), W_SYMBOL, domain='QQ')


ZERO_POLY = _poly(0)


def basis_bracket(i: int, j: int) -> Dict[int, int]:
    if i == j:
        return {}
    if (i, j) in _STRUCTURE:
        return _STRUCTURE[(i, j)]
    if (j, i) in _STRUCTURE:
        return {k: -c for k, c in _STRUCTURE[(j, i)].items()}
    return {}


class GVector:
    """a_D D + a_G G + a_Pt Pt + a_Px Px + a_Pv Pv + W(omega)."""

    __slots__ = ('coeffs', 'omega')

    def __init__(self, coeffs: Sequence = (0, 0, 0, 0, 0), omega=0):
        if len(coeffs) != 5:
            raise DomainError('GVector needs five finite coefficients')
        self.coeffs = tuple(sp.Rational(c) for c in coeffs)
        self.omega = omega if isinstance(omega, sp.Poly) else _poly(omega)

    @classmethod
    def basis(cls, name: str) -> 'GVector':
        coeffs = [0] * 5
        coeffs[BASIS.index(name)] = 1
        return cls(coeffs)

    @classmethod
    def W(cls, omega) -> 'GVector':
        return cls((0, 0, 0, 0, 0), omega)

    @property
    def aD(self):
        return self.coeffs[0]

    @property
    def aG(self):
        return self.coeffs[1]

    @property
    def aPt(self):
        return self.coeffs[2]

    @property
    def aPx(self):
        return self.coeffs[3]

    @property
    def aPv(self):
        return self.coeffs[4]

    def finite(self) -> 'GVector':
        return GVector(self.coeffs)

    def has_w(self) -> bool:
        return not self.omega.is_zero

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs) and self.omega.is_zero

    def degree(self) -> int:
        return -1 if self.omega.is_zero else self.omega.degree()

    def coordinates(self, max_degree: int) -> List[sp.Rational]:
        """Coefficients on (D, G, Pt, Px, Pv, 1, w, ..., w**max_degree)."""
        tail = [self.omega.coeff_monomial(W_SYMBOL ** k)
                for k in range(max_degree + 1)]
        return list(self.coeffs) + tail

    @classmethod
    def from_coordinates(cls, coords: Sequence) -> 'GVector':
        omega = sum(sp.Rational(c) * W_SYMBOL ** k
                    for k, c in enumerate(coords[5:]))
        return cls(coords[:5], omega)

    def __add__(self, other: 'GVector') -> 'GVector':
        return GVector([a + b for a, b in zip(self.coeffs, other.coeffs)],
                       self.omega + other.omega)

    def __neg__(self) -> 'GVector':
        return GVector([-a for a in self.coeffs], -self.omega)

    def __sub__(self, other: 'GVector') -> 'GVector':
        return self + (-other)

    def __rmul__(self, scalar) -> 'GVector':
        scalar = sp.Rational(scalar)
        return GVector([scalar * a for a in self.coeffs],
                       self.omega.mul_ground(scalar))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GVector):
            return NotImplemented
        return (self.coeffs == other.coeffs
                and (self.omega - other.omega).is_zero)

    def __hash__(self):
        return hash((self.coeffs, tuple(self.omega.all_coeffs())))

    def __repr__(self) -> str:
        parts = []
        for name, c in zip(BASIS, self.coeffs):
            if c == 1:
                parts.append(name)
            elif c != 0:
                parts.append(f'{c}*{name}')
        if self.has_w():
            parts.append(f'W({self.omega.as_expr()})')
        return ' + '.join(parts) if parts else '0'


def commutator(X: GVector, Y: GVector) -> GVector:
    coeffs = [sp.Integer(0)] * 5
    for i, a in enumerate(X.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(Y.coeffs):
            if b == 0:
                continue
            for k, c in basis_bracket(i, j).items():
                coeffs[k] += a * b * c
    omega = (X.omega * Y.omega.diff(W_SYMBOL)
             - Y.omega * X.omega.diff(W_SYMBOL))
    return GVector(coeffs, omega)


_PARSE_TRANSFORMS = standard_transformations + (
    implicit_multiplication, convert_xor
)


def parse_gvector(text: str) -> GVector:
    """Parse expressions such as 'D + 3Pt + 2Px + W(w^2 + 1)'."""
    names = {name: sp.Symbol(name) for name in BASIS}
    w_fn = sp.Function('W')
    local = dict(names, W=w_fn, w=W_SYMBOL)
    try:
        expr = sp.expand(parse_expr(text, local_dict=local,
                                    transformations=_PARSE_TRANSFORMS))
    except (SyntaxError, TypeError, sp.SympifyError) as e:
        raise DomainError(f'cannot parse generator {text!r}: {e}')

    omega = sp.Integer(0)
    finite = sp.Integer(0)
    for term in sp.Add.make_args(expr):
        calls = [a for a in term.atoms(sp.Function) if a.func == w_fn]
        if len(calls) > 1:
            raise DomainError(f'nested or repeated W in {text!r}')
        if calls:
            omega += sp.expand(term / calls[0]) * calls[0].args[0]
        else:
            finite += term

    coeffs = [finite.coeff(names[name]) for name in BASIS]
    rest = sp.expand(finite - sum(c * names[n] for c, n in zip(coeffs, BASIS)))
    if rest != 0 or any(not c.is_Rational for c in coeffs):
        raise DomainError(f'generator {text!r} is not a rational combination')
    try:
        return GVector(coeffs, sp.expand(omega))
    except (sp.PolynomialError, sp.CoercionFailed) as e:
        raise DomainError(
            f'W-part of {text!r} is not a rational polynomial: {e}'
        )


class WPart(Enum):
    NONE = 'none'
    FULL = 'full'
    SPAN = 'span'


class Subspace:
    """
    Span of GVectors, optionally plus the whole W-part <W(Omega)>.
    When the W-part is full, only the finite parts of the generators
    matter and they are stored projected.
    """

    def __init__(self, generators: Iterable[GVector] = (),
                 w_full: bool = False):
        gens = [g.finite() if w_full else g for g in generators]
        gens = [g for g in gens if not g.is_zero()]
        self.w_full = w_full
        self.generators = _independent(gens)

    @property
    def w_part(self) -> WPart:
        if self.w_full:
            return WPart.FULL
        if any(g.has_w() for g in self.generators):
            return WPart.SPAN
        return WPart.NONE

    @property
    def dim(self) -> Optional[int]:
        return None if self.w_full else len(self.generators)

    def is_zero(self) -> bool:
        return not self.w_full and not self.generators

    def contains(self, X: GVector) -> bool:
        if self.w_full:
            X = X.finite()
        if X.is_zero():
            return True
        return _in_span(self.generators, X)

    def contains_subspace(self, other: 'Subspace') -> bool:
        if other.w_full and not self.w_full:
            return False
        return all(self.contains(g) for g in other.generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.contains_subspace(other) and other.contains_subspace(self)

    def __add__(self, other: 'Subspace') -> 'Subspace':
        return Subspace(self.generators + other.generators,
                        self.w_full or other.w_full)

    def __repr__(self) -> str:
        inner = [repr(g) for g in self.generators]
        if self.w_full:
            inner.append('W(Omega)')
        return '<' + ', '.join(inner) + '>'

    def describe(self) -> Dict:
        return {'generators': [repr(g) for g in self.generators],
                'w_part': self.w_part.value}


def span(*vectors: GVector, w_full: bool = False) -> Subspace:
    return Subspace(vectors, w_full)


def finite_part() -> Subspace:
    return Subspace([GVector.basis(n) for n in BASIS])


def full_algebra() -> Subspace:
    return Subspace([GVector.basis(n) for n in BASIS], w_full=True)


def w_part() -> Subspace:
    return Subspace((), w_full=True)


def _max_degree(vectors: Iterable[GVector]) -> int:
    return max([v.degree() for v in vectors] + [-1])


def _matrix(vectors: Sequence[GVector], max_degree: int) -> sp.Matrix:
    return sp.Matrix([v.coordinates(max_degree) for v in vectors])


def _independent(vectors: List[GVector]) -> List[GVector]:
    if not vectors:
        return []
    n = _max_degree(vectors)
    _, pivots = _matrix(vectors, n).T.rref()
    return [vectors[i] for i in pivots]


def _in_span(vectors: Sequence[GVector], X: GVector) -> bool:
    if not vectors:
        return X.is_zero()
    n = _max_degree(list(vectors) + [X])
    base = _matrix(vectors, n)
    return base.rank() == base.col_join(_matrix([X], n)).rank()


def bracket(A: Subspace, B: Subspace) -> Subspace:
    """[A, B]; full W-parts are only combined with finite or full spaces."""
    for one, two in ((A, B), (B, A)):
        if one.w_full and two.w_part == WPart.SPAN:
            raise DomainError(
                'brackets of the full W-part with listed omegas are not exact'
            )
    products = [commutator(a, b) for a in A.generators for b in B.generators]
    return Subspace(products, A.w_full and B.w_full)


def is_subalgebra(s: Subspace) -> bool:
    return s.contains_subspace(bracket(s, s))


def _series(s: Subspace, step) -> List[Subspace]:
    series = [s]
    while True:
        nxt = step(series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)
        if nxt.is_zero():
            return series


def derived_series(s: Subspace) -> List[Subspace]:
    if not is_subalgebra(s):
        raise NotSubalgebraError(f'{s!r} is not closed under the bracket')
    return _series(s, lambda cur: bracket(cur, cur))


def lower_central_series(s: Subspace) -> List[Subspace]:
    if not is_subalgebra(s):
        raise NotSubalgebraError(f'{s!r} is not closed under the bracket')
    return _series(s, lambda cur: bracket(s, cur))


def is_solvable(s: Subspace) -> bool:
    return derived_series(s)[-1].is_zero()


def is_nilpotent(s: Subspace) -> bool:
    return lower_central_series(s)[-1].is_zero()


def center(s: Subspace) -> Subspace:
    if not is_subalgebra(s):
        raise NotSubalgebraError(f'{s!r} is not closed under the bracket')
    gens = s.generators
    if not gens:
        return Subspace()
    brackets = [[commutator(gi, gj) for gi in gens] for gj in gens]
    n = _max_degree([b for row in brackets for b in row])
    rows = []
    for row in brackets:
        block = _matrix(row, n).T
        rows.extend(block.tolist())
    kernel = sp.Matrix(rows).nullspace()
    vectors = []
    for k in kernel:
        z = GVector()
        for c, g in zip(k, gens):
            z = z + sp.Rational(c) * g
        # omega parts of central elements must commute with all of W
        if s.w_full and z.has_w():
            continue
        vectors.append(z)
    return Subspace(vectors)


def is_ideal(s: Subspace, ambient: Optional[Subspace] = None) -> bool:
    ambient = ambient or full_algebra()
    return s.contains_subspace(bracket(s, ambient))


def ideal_closure(s: Subspace, ambient: Optional[Subspace] = None) -> Subspace:
    ambient = ambient or full_algebra()
    current = s
    while True:
        nxt = current + bracket(current, ambient)
        if nxt == current:
            return current
        current = nxt


def _extensions(s: Subspace) -> List[Subspace]:
    """Ideals properly containing s obtained by adjoining one generator."""
    out = [ideal_closure(s + Subspace([GVector.basis(n)]))
           for n in BASIS if not s.contains(GVector.basis(n))]
    if not s.w_full:
        out.append(s + w_part())
    return out


def radical_check(s: Subspace) -> bool:
    if not is_ideal(s) or not is_solvable(s):
        return False
    return not any(is_solvable(e) for e in _extensions(s))


def nilradical_check(s: Subspace) -> bool:
    if not is_ideal(s) or not is_nilpotent(s):
        return False
    return not any(is_nilpotent(e) for e in _extensions(s))


def megaideal_closure(i0: Subspace, i1: Subspace, i2: Subspace) -> Subspace:
    """{z in i0 : [z, i1] is contained in i2}."""
    spaces = (i0, i1, i2)
    if any(s.w_full for s in spaces) and any(
            s.w_part == WPart.SPAN for s in spaces):
        raise DomainError('cannot mix the full W-part with listed omegas')
    any_full = any(s.w_full for s in spaces)

    def project(v: GVector) -> GVector:
        # with a full W-part present only finite components are tracked
        return v.finite() if any_full else v

    basis0 = [project(g) for g in i0.generators]
    targets = [project(g) for g in i2.generators]
    images = [project(g) for g in i1.generators]

    result = []
    if basis0:
        products = [[project(commutator(a, y)) for a in basis0] for y in images]
        n = _max_degree(basis0 + targets + [p for r in products for p in r])
        m, k = len(basis0), len(targets)
        rows = []
        for block_index, row in enumerate(products):
            coords_a = _matrix(row, n).T
            coords_t = _matrix(targets, n).T if targets else None
            for r in range(coords_a.rows):
                line = [0] * (m + k * len(products))
                line[:m] = list(coords_a.row(r))
                if coords_t is not None:
                    offset = m + block_index * k
                    line[offset:offset + k] = [-c for c in coords_t.row(r)]
                rows.append(line)
        if rows:
            kernel = sp.Matrix(rows).nullspace()
            for vec in kernel:
                z = GVector()
                for c, a in zip(vec[:m], basis0):
                    z = z + sp.Rational(c) * a
                result.append(z)
        else:
            result = list(basis0)
    w_full = i0.w_full and (i1.w_part == WPart.NONE or i2.w_full)
    return Subspace(result, w_full)


def jacobi_defect(X: GVector, Y: GVector, Z: GVector) -> GVector:
    return (commutator(X, commutator(Y, Z))
            + commutator(Y, commutator(Z, X))
            + commutator(Z, commutator(X, Y)))


def structure_constants() -> List[Dict]:
    out = []
    for i, a in enumerate(BASIS):
        for j, b in enumerate(BASIS):
            if i < j and basis_bracket(i, j):
                value = GVector()
                for k, c in basis_bracket(i, j).items():
                    value = value + c * GVector.basis(BASIS[k])
                out.append({'left': a, 'right': b, 'bracket': repr(value)})
    return out


def random_gvector(rng, max_degree: int = 3) -> GVector:
    """Random rational finite part plus a random polynomial W-part."""
    def q():
        return sp.Rational(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))

    omega = sum(q() * W_SYMBOL ** k for k in range(max_degree + 1))
    return GVector([q() for _ in BASIS], omega)


def jacobi_holds(rng, samples: int = Algebra.JACOBI_TRIPLES) -> bool:
    """Jacobi identity on random triples, exactly."""
    return all(
        jacobi_defect(*(random_gvector(rng) for _ in range(3))).is_zero()
        for _ in range(samples)
    )
