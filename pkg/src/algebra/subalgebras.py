"""
Optimal lists of one- and two-dimensional subalgebras of g, canonicalization
of one-dimensional subalgebras and exact checks of the two-dimensional list.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import sympy as sp

from src.algebra.automorphisms import (
    AffineW, GroupElement, NormalizingW, push_all
)
from src.algebra.lie_algebra import (
    GVector, Subspace, commutator, full_algebra, is_ideal, megaideal_closure,
    random_gvector, span, w_part
)
from src.config import Algebra
from src.util.errors import DomainError

D, G, Pt, Px, Pv = (GVector.basis(n) for n in ('D', 'G', 'Pt', 'Px', 'Pv'))
W1 = GVector.W(1)
Ww = GVector.W(sp.Symbol('w'))

ONE_DIM_FAMILIES = {
    1: 'D + a*G + b*Pv + W(delta1)',
    2: 'G + delta2*Pt + b*Pv + W(delta1)',
    3: 'Pt + delta2*Pv + W(delta1)',
    4: 'Px + delta2*Pv + W(delta1)',
    5: 'Pv + W(delta1)',
    6: 'W(1)',
}


def megaideals() -> Dict[str, Subspace]:
    """The megaideals used to pin down the complete point symmetry group."""
    return {
        'r': span(D, G, Pt, Px, Pv),
        'm1': span(G, Px, Pv),
        'r_prime': span(Pt, Px),
        'n_prime': span(Px),
        'center': span(Pv),
        'g_second': w_part(),
    }


def invariant_subspaces() -> Dict[str, Subspace]:
    """Listed megaideals plus g itself and m2, which only Aut(r) reveals."""
    return dict(megaideals(), g=full_algebra(), m2=span(D, Pt, Px, Pv))


@dataclass
class CanonicalForm:
    family: int
    name: str
    params: Dict[str, sp.Rational]
    witness: List[GroupElement]
    canonical: GVector
    scale: sp.Rational

    def describe(self) -> Dict:
        return {
            'family': self.family,
            'name': self.name,
            'params': {k: str(v) for k, v in self.params.items()},
            'witness': [str(g) for g in self.witness],
            'canonical': repr(self.canonical),
            'scale': str(self.scale),
        }


def _leading(X: GVector) -> Tuple[int, sp.Rational]:
    for i, c in enumerate(X.coeffs):
        if c != 0:
            return i, c
    return 5, sp.Integer(1)


def _finite_witness(case: int, Xn: GVector) -> List[GroupElement]:
    _, a2, a3, a4, a5 = Xn.coeffs
    if case == 0:
        return [GroupElement.pt_shift(a3), GroupElement.px_shift(a4 - a2 * a3)]
    if case == 1:
        out = [GroupElement.pt_shift(a4)]
        if a3 != 0:
            out.append(GroupElement.dilation(1 / a3))
        return out
    if case == 2:
        out = [GroupElement.galilean(-a4)]
        if a5 != 0:
            out.append(GroupElement.dilation(a5))
        return out
    if case == 3 and a5 != 0:
        return [GroupElement.dilation(a5)]
    return []


def _w_normalizer(omega, scale) -> GroupElement:
    if omega.degree() == 0:
        return GroupElement.w_reparam(AffineW(scale / omega.LC()))
    return GroupElement.w_reparam(NormalizingW(omega, scale))


def _params(family: int, C: GVector) -> Dict[str, sp.Rational]:
    delta1 = C.omega.coeff_monomial(1)
    if family == 1:
        return {'a': C.aG, 'b': C.aPv, 'delta1': delta1}
    if family == 2:
        return {'delta2': C.aPt, 'b': C.aPv, 'delta1': delta1}
    if family in (3, 4):
        return {'delta2': C.aPv, 'delta1': delta1}
    if family == 5:
        return {'delta1': delta1}
    return {}


def canonicalize_1d(X: GVector) -> CanonicalForm:
    """
    Map <X> to its representative in the optimal list. The witness applied
    to X gives scale * canonical exactly.
    """
    if X.is_zero():
        raise DomainError('cannot canonicalize the zero vector')
    case, lead = _leading(X)
    Xn = (1 / lead) * X.finite()
    witness = _finite_witness(case, Xn)
    Y = push_all(witness, X)
    _, scale = _leading(Y)
    if X.has_w():
        witness.append(_w_normalizer(X.omega, scale))
        Y = push_all(witness[-1:], Y)
    canonical = (1 / scale) * Y
    family = case + 1
    return CanonicalForm(family, ONE_DIM_FAMILIES[family],
                         _params(family, canonical), witness, canonical, scale)


def replay(X: GVector, form: CanonicalForm) -> bool:
    return push_all(form.witness, X) == form.scale * form.canonical


def replay_holds(rng: np.random.Generator,
                 samples: int = Algebra.REPLAYS) -> bool:
    """Canonicalize random nonzero generators and replay every witness."""
    done = 0
    while done < samples:
        X = random_gvector(rng)
        if X.is_zero():
            continue
        if not replay(X, canonicalize_1d(X)):
            return False
        done += 1
    return True


@dataclass
class TwoDimFamily:
    number: int
    name: str
    params: Tuple[str, ...]
    build: Callable[..., Tuple[GVector, GVector]]
    binary: Tuple[str, ...] = field(default=())


def two_dim_families() -> List[TwoDimFamily]:
    """The 17 families; delta5 runs through {0, 1}, the rest are arbitrary."""
    return [
        TwoDimFamily(1, '<D+aPv+W(d1), G+bPv+W(d2)>', ('a', 'b', 'd1', 'd2'),
                     lambda a, b, d1, d2: (D + a * Pv + d1 * W1,
                                           G + b * Pv + d2 * W1)),
        TwoDimFamily(2, '<D+aPv+W(d5), Pt>', ('a', 'd5'),
                     lambda a, d5: (D + a * Pv + d5 * W1, Pt), ('d5',)),
        TwoDimFamily(3, '<D+aPv+W(w), Pt+W(1)>', ('a',),
                     lambda a: (D + a * Pv + Ww, Pt + W1)),
        TwoDimFamily(4, '<D+aG+bPv+W(d5), Px>', ('a', 'b', 'd5'),
                     lambda a, b, d5: (D + a * G + b * Pv + d5 * W1, Px),
                     ('d5',)),
        TwoDimFamily(5, '<D+aG+bPv+W(w), Px+W(1)>', ('a', 'b'),
                     lambda a, b: (D + a * G + b * Pv + Ww, Px + W1)),
        TwoDimFamily(6, '<D+aG+W(d1), Pv+W(d2)>', ('a', 'd1', 'd2'),
                     lambda a, d1, d2: (D + a * G + d1 * W1, Pv + d2 * W1)),
        TwoDimFamily(7, '<G+d3Pt+aPv+W(d1), Px+d4Pv+W(d2)>',
                     ('a', 'd1', 'd2', 'd3', 'd4'),
                     lambda a, d1, d2, d3, d4: (G + d3 * Pt + a * Pv + d1 * W1,
                                                Px + d4 * Pv + d2 * W1)),
        TwoDimFamily(8, '<G+d5Pt+W(d1), Pv+W(d2)>', ('d1', 'd2', 'd5'),
                     lambda d1, d2, d5: (G + d5 * Pt + d1 * W1, Pv + d2 * W1),
                     ('d5',)),
        TwoDimFamily(9, '<Pt+d3Pv+W(d1), Px+d4Pv+W(d2)>',
                     ('d1', 'd2', 'd3', 'd4'),
                     lambda d1, d2, d3, d4: (Pt + d3 * Pv + d1 * W1,
                                             Px + d4 * Pv + d2 * W1)),
        TwoDimFamily(10, '<Pt+W(d1), Pv+W(d2)>', ('d1', 'd2'),
                     lambda d1, d2: (Pt + d1 * W1, Pv + d2 * W1)),
        TwoDimFamily(11, '<Px+W(d1), Pv+W(d2)>', ('d1', 'd2'),
                     lambda d1, d2: (Px + d1 * W1, Pv + d2 * W1)),
        TwoDimFamily(12, '<D+aG+bPv+cW(w), W(1)>', ('a', 'b', 'c'),
                     lambda a, b, c: (D + a * G + b * Pv + c * Ww, W1)),
        TwoDimFamily(13, '<G+d5Pt+bPv+cW(w), W(1)>', ('b', 'c', 'd5'),
                     lambda b, c, d5: (G + d5 * Pt + b * Pv + c * Ww, W1),
                     ('d5',)),
        TwoDimFamily(14, '<Pt+d1Pv+d2W(w), W(1)>', ('d1', 'd2'),
                     lambda d1, d2: (Pt + d1 * Pv + d2 * Ww, W1)),
        TwoDimFamily(15, '<Px+d1Pv+d2W(w), W(1)>', ('d1', 'd2'),
                     lambda d1, d2: (Px + d1 * Pv + d2 * Ww, W1)),
        TwoDimFamily(16, '<Pv+cW(w), W(1)>', ('c',),
                     lambda c: (Pv + c * Ww, W1)),
        TwoDimFamily(17, '<W(w), W(1)>', (),
                     lambda: (Ww, W1)),
    ]


def check_pair(Q1: GVector, Q2: GVector) -> Dict:
    """Exact closure of <Q1, Q2> and the bracket in that basis."""
    s = Subspace([Q1, Q2])
    value = commutator(Q1, Q2)
    closed = s.contains(value)
    coords = None
    if closed and s.dim == 2:
        c1, c2 = sp.symbols('c1 c2')
        diff = [a - c1 * b - c2 * c for a, b, c in
                zip(value.coordinates(3), Q1.coordinates(3),
                    Q2.coordinates(3))]
        solution = sp.solve(diff, [c1, c2], dict=True)
        if solution:
            coords = (solution[0].get(c1, 0), solution[0].get(c2, 0))
    return {'dim': s.dim, 'closed': closed, 'bracket': repr(value),
            'in_basis': None if coords is None else [str(c) for c in coords]}


def _sample_params(family: TwoDimFamily,
                   rng: np.random.Generator) -> Dict[str, sp.Rational]:
    out = {}
    for name in family.params:
        if name in family.binary:
            out[name] = sp.Integer(int(rng.integers(0, 2)))
        else:
            out[name] = sp.Rational(int(rng.integers(-6, 7)),
                                    int(rng.integers(1, 4)))
    return out


def verify_2d_list(samples: int = 5,
                   rng: Optional[np.random.Generator] = None) -> List[Dict]:
    rng = rng or np.random.default_rng(0)
    report = []
    for family in two_dim_families():
        for _ in range(samples if family.params else 1):
            params = _sample_params(family, rng)
            Q1, Q2 = family.build(**params)
            row = check_pair(Q1, Q2)
            row.update({'family': family.number, 'name': family.name,
                        'params': {k: str(v) for k, v in params.items()}})
            report.append(row)
    return report


def megaideal_report() -> List[Dict]:
    """Each invariant subspace is an ideal; m1 is recovered by its closure."""
    listed = megaideals()
    rows = [{'name': name, 'subspace': repr(s), 'ideal': is_ideal(s),
             'listed': name in listed}
            for name, s in invariant_subspaces().items()]
    r = listed['r']
    m1 = megaideal_closure(r, r, listed['n_prime'])
    rows.append({'name': 'closure(r, r, n_prime)', 'subspace': repr(m1),
                 'ideal': is_ideal(m1), 'listed': False,
                 'matches': m1 == listed['m1']})
    return rows
