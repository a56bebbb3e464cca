import numpy as np
import pytest

from src.telegraph.functions import (
    AffineFn, ComposedFn, ExpFn, ExpTheta, IdentityFn, NegatedInverseFn,
    OddCubicFn, PolyTheta, TanhFn
)
from src.telegraph.modes import (
    ConstMode, DampedMode, ExpMode, ExpVMode, LinUMode, QuadMode, TelegraphFn,
    adjoint_form, dispersion_mu, klein_gordon_residual, to_riemann_form
)
from src.util.errors import DomainError

U = np.linspace(-1.0, 1.0, 7)
V = np.linspace(-0.5, 1.5, 7)

MODES = [
    ConstMode(),
    LinUMode(),
    ExpVMode(),
    QuadMode(),
    ExpMode.from_branch(0.5, '+'),
    ExpMode.from_branch(1.5, '-'),
    DampedMode.from_branch(0.3, '+', 0.2),
    DampedMode.from_branch(0.5, '-'),
]


@pytest.mark.parametrize('mode', MODES, ids=lambda m: m.describe()['mode'])
def test_modes_solve_telegraph_equation(mode):
    f = TelegraphFn.single(mode, 1.7)
    np.testing.assert_allclose(f.residual(U, V), 0.0, atol=1e-9)
    np.testing.assert_allclose(klein_gordon_residual(f, U, V), 0.0, atol=1e-9)
    np.testing.assert_allclose(to_riemann_form(f).residual(U, V), 0.0,
                               atol=1e-9)
    np.testing.assert_allclose(adjoint_form(f).residual(U, V), 0.0, atol=1e-9)


BOUNDED_MODES = [
    ConstMode(),
    LinUMode(),
    ExpVMode(),
    QuadMode(),
    ExpMode.from_branch(0.5, '+'),
    ExpMode.from_branch(0.5, '-'),
    ExpMode.from_branch(1.0, '+'),
    DampedMode.from_branch(0.3, '+', 0.2),
    DampedMode.from_branch(0.5, '-'),
]


def test_catalog_residual_on_random_points(rng):
    u, v = rng.uniform(-3.0, 3.0, (2, 1000))
    total = TelegraphFn(())
    for mode in BOUNDED_MODES:
        f = TelegraphFn.single(mode)
        assert np.max(np.abs(f.residual(u, v))) <= 1e-12, mode.describe()
        total = total + f
    assert np.max(np.abs(total.residual(u, v))) <= 1e-12


@pytest.mark.parametrize('mode', MODES, ids=lambda m: m.describe()['mode'])
def test_derivatives_stay_in_catalog(mode):
    f = TelegraphFn.single(mode)
    p = f.partials(U, V)
    du, dv = f.diff_u().partials(U, V), f.diff_v().partials(U, V)
    np.testing.assert_allclose(du.phi, p.phi_u, atol=1e-12)
    np.testing.assert_allclose(dv.phi, p.phi_v, atol=1e-12)
    np.testing.assert_allclose(du.phi_v, p.phi_uv, atol=1e-12)


def test_dispersion_roots():
    for lam in (0.0, 0.5, 2.0):
        for branch in ('+', '-'):
            mu = dispersion_mu(lam, branch)
            assert mu * mu + mu == pytest.approx(lam * lam)
    assert dispersion_mu(0.0, '+') == 0.0
    assert dispersion_mu(0.0, '-') == -1.0


def test_bad_modes_raise():
    with pytest.raises(DomainError):
        ExpMode(1.0, 1.0)
    with pytest.raises(DomainError):
        DampedMode.from_branch(0.6)
    with pytest.raises(DomainError):
        dispersion_mu(1.0, 'x')


def test_quad_adjoint_form():
    psi = adjoint_form(TelegraphFn.single(QuadMode()))
    r1, r2 = 0.3, -0.7
    assert float(psi.partials(r1, r2).f) == pytest.approx(
        (r1 + r2) ** 2 - 2.0 * (r1 - r2))


def test_telegraph_sum_and_scaling():
    f = TelegraphFn.single(QuadMode()) + TelegraphFn.single(ExpVMode(), 2.0)
    g = f - TelegraphFn.single(QuadMode())
    np.testing.assert_allclose(g.partials(U, V).phi, 2.0 * np.exp(-V))
    np.testing.assert_allclose(f.scaled(-1.0).partials(U, V).phi,
                               -f.partials(U, V).phi)


MONOTONE = [IdentityFn(), AffineFn(-2.0, 0.5), ExpFn(), TanhFn(),
            OddCubicFn(1.0, 0.5)]


@pytest.mark.parametrize('fn', MONOTONE, ids=lambda f: f.describe()['kind'])
def test_monotone_inverse_and_derivative(fn):
    w = np.linspace(-0.9, 0.9, 11)
    np.testing.assert_allclose(fn.inverse(fn(w)), w, atol=1e-10)
    h = 1e-6
    numeric = (fn(w + h) - fn(w - h)) / (2.0 * h)
    np.testing.assert_allclose(fn.derivative(w), numeric, rtol=1e-6, atol=1e-8)


def test_odd_cubic_inverse_is_closed_form():
    fn = OddCubicFn(1.0, 3.0)
    # w**3 + 3w = 4 has the single real root w = 1
    assert fn.inverse(4.0) == pytest.approx(1.0, abs=1e-12)
    w = np.linspace(-10.0, 10.0, 41)
    np.testing.assert_allclose(fn.inverse(fn(w)), w, rtol=1e-10, atol=1e-10)


def test_negated_inverse_and_composition():
    W = AffineFn(2.0, 1.0)
    F = NegatedInverseFn(W)
    assert F(5.0) == pytest.approx(-2.0)
    assert F.inverse(-2.0) == pytest.approx(5.0)
    assert F.derivative(5.0) == pytest.approx(-0.5)
    C = ComposedFn(ExpFn(), W)
    assert C(0.0) == pytest.approx(np.e)
    assert C.inverse(np.e) == pytest.approx(0.0)


def test_affine_needs_slope():
    with pytest.raises(DomainError):
        AffineFn(0.0)
    with pytest.raises(DomainError):
        OddCubicFn(-1.0, 1.0)


def test_theta_catalog():
    th, th_u, th_uu = PolyTheta([1.0, 0.0, 0.5]).derivatives(2.0)
    assert (th, th_u, th_uu) == (3.0, 2.0, 1.0)
    e, e_u, e_uu = ExpTheta(2.0, 3.0).derivatives(0.0)
    assert (float(e), float(e_u), float(e_uu)) == (3.0, 6.0, 12.0)
    assert PolyTheta([]).derivatives(1.0) == (0.0, 0.0, 0.0)
