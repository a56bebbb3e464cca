import numpy as np
import pytest
import sympy as sp

from src.algebra.automorphisms import (
    AffineW, AutMatrix, GroupElement, NormalizingW, adjoint_push,
    aut_group_closed, aut_inverse, aut_preserves_brackets, automorphisms_hold,
    megaideal_invariance, random_aut
)
from src.algebra.lie_algebra import (
    GVector, W_SYMBOL, center, commutator, derived_series, finite_part,
    full_algebra, is_ideal, jacobi_defect, jacobi_holds, lower_central_series,
    nilradical_check, parse_gvector, radical_check, random_gvector, span,
    structure_constants
)
from src.algebra.subalgebras import (
    canonicalize_1d, invariant_subspaces, megaideal_report, megaideals, replay,
    replay_holds, two_dim_families, verify_2d_list
)
from src.config import Algebra
from src.util.errors import (
    DomainError, InvalidAutomorphismError, NotSubalgebraError,
    UnsupportedTransportError
)

D, G, Pt, Px, Pv = (GVector.basis(n) for n in ('D', 'G', 'Pt', 'Px', 'Pv'))
w = W_SYMBOL


def test_finite_brackets():
    assert commutator(D, Pt) == -Pt
    assert commutator(Pt, D) == Pt
    assert commutator(D, Px) == -Px
    assert commutator(G, Pt) == -Px
    assert commutator(D, G).is_zero()
    assert commutator(Pv, D).is_zero()
    assert len(structure_constants()) == 3


def test_w_brackets():
    assert commutator(GVector.W(w), GVector.W(w ** 2)) == GVector.W(w ** 2)
    assert commutator(GVector.W(1), GVector.W(w)) == GVector.W(1)
    assert commutator(D, GVector.W(w ** 3)).is_zero()


def test_jacobi_identity(rng):
    assert Algebra.JACOBI_TRIPLES == 1000
    assert jacobi_holds(rng)
    X, Y, Z = (random_gvector(rng) for _ in range(3))
    assert jacobi_defect(X, Y, Z).is_zero()


def test_parse_gvector():
    X = parse_gvector('D + 3Pt + 2Px + W(w^2 + 1)')
    assert X.coeffs == (1, 0, 3, 2, 0)
    assert X == D + 3 * Pt + 2 * Px + GVector.W(w ** 2 + 1)
    assert parse_gvector('1/2*G - Pv') == sp.Rational(1, 2) * G - Pv
    assert parse_gvector('2*W(w)') == GVector.W(2 * w)


@pytest.mark.parametrize('text', ['D + x', 'W(sin(w))', 'D +* Pt'])
def test_parse_rejects_non_generators(text):
    with pytest.raises(DomainError):
        parse_gvector(text)


def test_center_and_series():
    r = finite_part()
    assert center(r) == span(Pv)
    assert center(full_algebra()) == span(Pv)
    series = derived_series(r)
    assert len(series) == 3
    assert series[1] == span(Pt, Px)
    assert series[-1].is_zero()
    lower = lower_central_series(span(G, Pt, Px, Pv))
    assert lower[1] == span(Px)
    assert lower[-1].is_zero()


def test_series_need_a_subalgebra():
    with pytest.raises(NotSubalgebraError):
        derived_series(span(D, Pt + G))


def test_radical_and_nilradical():
    assert radical_check(finite_part())
    assert not radical_check(span(G, Pt, Px, Pv))
    assert nilradical_check(span(G, Pt, Px, Pv))
    assert not nilradical_check(finite_part())


def test_megaideals():
    listed = megaideals()
    assert list(listed) == ['r', 'm1', 'r_prime', 'n_prime', 'center',
                            'g_second']
    assert listed['r'] == span(D, G, Pt, Px, Pv)
    assert listed['r'] == finite_part()
    assert listed['g_second'].w_full
    for name, s in invariant_subspaces().items():
        assert is_ideal(s), name
    rows = megaideal_report()
    assert all(row['ideal'] for row in rows)
    assert {row['name'] for row in rows if not row['listed']} >= {'g', 'm2'}
    assert rows[-1]['matches']


def test_megaideals_invariant_under_automorphisms(rng):
    finite = [s for s in invariant_subspaces().values() if not s.w_full]
    assert all(megaideal_invariance(finite, Algebra.AUTOMORPHISMS, rng))
    assert not all(megaideal_invariance([span(D)], Algebra.AUTOMORPHISMS, rng))


def test_automorphisms(rng):
    assert Algebra.AUTOMORPHISMS == 100
    assert aut_preserves_brackets(AutMatrix.identity())
    assert automorphisms_hold(rng)
    for _ in range(10):
        m1, m2 = random_aut(rng), random_aut(rng)
        assert aut_preserves_brackets(m1)
        assert aut_preserves_brackets(aut_group_closed(m1, m2))
        assert aut_inverse(m1) * m1 == AutMatrix.identity()


def test_invalid_automorphisms():
    with pytest.raises(InvalidAutomorphismError):
        AutMatrix.from_params(b22=0)
    with pytest.raises(InvalidAutomorphismError):
        AutMatrix(sp.eye(4))
    bad = AutMatrix.identity().matrix.copy()
    bad[3, 1] = 1
    with pytest.raises(InvalidAutomorphismError):
        AutMatrix(bad)


def test_canonicalize_dilation_family():
    X = parse_gvector('D + 3Pt + 2Px')
    form = canonicalize_1d(X)
    assert form.family == 1
    assert form.params == {'a': 0, 'b': 0, 'delta1': 0}
    assert form.canonical == D
    assert [g.tag for g in form.witness] == ['Pt-shift', 'Px-shift']
    assert replay(X, form)


def test_canonicalize_galilean_family():
    X = 2 * G + 4 * Pt + Pv
    form = canonicalize_1d(X)
    assert form.family == 2
    assert form.scale == 2
    assert form.params['delta2'] == 1
    assert form.params['b'] == sp.Rational(1, 2)
    assert replay(X, form)


def test_canonicalize_w_normalization():
    form = canonicalize_1d(parse_gvector('Pv + W(w^2)'))
    assert form.family == 5
    assert form.canonical == Pv + GVector.W(1)
    assert form.params['delta1'] == 1
    only_w = canonicalize_1d(GVector.W(3 * w))
    assert only_w.family == 6
    assert only_w.canonical == GVector.W(1)


def test_canonical_replay_on_random_vectors(rng):
    assert Algebra.REPLAYS == 200
    assert replay_holds(rng)
    for _ in range(10):
        X = random_gvector(rng, max_degree=0)
        if X.is_zero():
            continue
        assert replay(X, canonicalize_1d(X))


def test_canonicalize_zero():
    with pytest.raises(DomainError):
        canonicalize_1d(GVector())


def test_w_reparametrizations():
    shifted = adjoint_push(GroupElement.w_reparam(AffineW(2, 1)),
                           GVector.W(w))
    assert shifted == GVector.W(w - 1)
    normal = NormalizingW(GVector.W(w).omega)
    with pytest.raises(UnsupportedTransportError):
        normal.transport(GVector.W(w ** 2 + w).omega)
    with pytest.raises(DomainError):
        GroupElement.dilation(0)
    with pytest.raises(DomainError):
        GroupElement('rotation', 1)


def test_two_dim_list_is_closed(rng):
    rows = verify_2d_list(samples=2, rng=rng)
    assert {row['family'] for row in rows} == set(range(1, 18))
    assert len(two_dim_families()) == 17
    assert all(row['closed'] for row in rows)


def test_two_dim_bracket_in_basis():
    rows = verify_2d_list(samples=1, rng=np.random.default_rng(3))
    third = next(row for row in rows if row['family'] == 3)
    assert third['in_basis'] == ['0', '-1']
