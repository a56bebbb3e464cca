import numpy as np
import pytest

from src.algebra.lie_algebra import parse_gvector
from src.model.charts import RiemannState
from src.model.residuals import JetPoint
from src.solutions.hodograph import UltraSingularSolution
from src.solutions.sampling import GridSpec
from src.telegraph.functions import AffineFn, OddCubicFn
from src.telegraph.modes import (
    ExpMode, ExpVMode, QuadMode, TelegraphFn, adjoint_form, to_riemann_form
)
from src.util.errors import DomainError
from src.verifiers import conservation_verifier as cv
from src.verifiers import gensym_verifier as gv
from src.verifiers import hamiltonian_verifier as hv
from src.verifiers import residual_verifier as rv
from src.verifiers import symmetry_verifier as sv
from src.verifiers.results import order_check, tolerance_check

GRID = GridSpec((0.5, 1.0), (-0.5, 0.5), 4, 5)
WINDOW = ((0.5, 1.0), (-0.5, 0.5))
POINTS = [(0.75, 0.0), (0.6, 0.3)]


# Results

def test_tolerance_check():
    assert tolerance_check('a', 1e-9, 1e-8).passed
    assert not tolerance_check('a', 1e-7, 1e-8).passed
    assert not tolerance_check('a', float('nan'), 1e-8).passed


def test_order_check():
    steps = [4e-3, 2e-3, 1e-3]
    assert order_check('a', steps, [16e-6, 4e-6, 1e-6]).value \
        == pytest.approx(2.0)
    floor = order_check('a', steps, [1e-13, 1e-14, 1e-13])
    assert floor.passed and floor.value == float('inf')
    assert floor.to_dict()['value'] == 'inf'
    assert not order_check('a', steps, [1e-3, 1e-3, 1e-3]).passed


# Residuals

def test_residual_checks_on_quad(quad):
    check = rv.residual_check(quad, GRID, True, threads=2)
    assert check.passed
    assert check.detail['multiple_roots'] == 0
    assert rv.residual_check(quad, GRID, False, threads=2).passed
    assert rv.trichotomy_check(quad, GRID, threads=2).passed


def test_trichotomy_of_ultra_singular():
    sol = UltraSingularSolution(0.3, -0.2, W=AffineFn(2.0))
    check = rv.trichotomy_check(sol, GRID, threads=1)
    assert check.passed
    assert check.detail['expected_rank'] == 0


def test_equivalence_check(quad, rng):
    assert rv.equivalence_check(quad, WINDOW, 10, rng).passed


# Point symmetries

def test_compose_matches_sequential_action():
    g1 = sv.GroupParams(T0=0.3, T1=2.0, X0=-0.1, U0=0.4, V0=0.2)
    g2 = sv.GroupParams(T0=-0.5, T1=-0.5, X0=0.7, U0=-0.3)
    both = sv.compose(g2, g1)
    np.testing.assert_allclose(both.push_point(0.7, 0.2),
                               g2.push_point(*g1.push_point(0.7, 0.2)))
    np.testing.assert_allclose(g1.pull_point(*g1.push_point(0.7, 0.2)),
                               (0.7, 0.2))


def test_group_params_validation():
    with pytest.raises(DomainError):
        sv.GroupParams(T1=0.0)


def test_orbit_and_group_law(quad, rng):
    params = [sv.reflection_tx(), sv.reflection_w(),
              sv.GroupParams(T0=0.2, T1=1.5, X0=0.1, U0=-0.3, V0=0.4,
                             Wmap=OddCubicFn(1.0, 0.5))]
    params += [sv.random_params(rng) for _ in range(3)]
    assert sv.orbit_check(quad, params, POINTS).passed
    pairs = [(sv.random_params(rng), sv.random_params(rng)) for _ in range(3)]
    assert sv.group_law_check(quad, pairs, POINTS).passed


@pytest.mark.parametrize('label', ['Pt', 'Px', 'Pv', 'W(w)', 'Pt + W(w^2)'])
def test_translation_flows_are_exact(quad, label):
    check = sv.flow_check(quad, parse_gvector(label), label, points=POINTS)
    assert check.passed
    assert check.detail['status'] == 'exact'


@pytest.mark.parametrize('label', ['D', 'G'])
def test_flow_defect_is_second_order(quad, label):
    check = sv.flow_check(quad, parse_gvector(label), label, points=POINTS)
    assert check.passed


def test_uv_subsystem_symmetry_flow(quad):
    check = sv.flow_check(quad, sv.J_BREVE, 'J', points=POINTS)
    assert check.passed
    assert check.detail['status'] == 'fitted'


# Generalized symmetries

def test_determining_equations(rng):
    phi = to_riemann_form(TelegraphFn.single(ExpMode.from_branch(0.5)))
    chars = list(gv.named_characteristics(phi).values())
    chars.append(gv.gensym_W('w0**2 + w1', 'W2'))
    assert gv.determining_check(chars, 50, rng).passed


def test_commutators(rng):
    phi = to_riemann_form(TelegraphFn.single(ExpMode.from_branch(0.5)))
    named = gv.named_characteristics(phi)
    D, G1, G2, P, W = (named[k] for k in ('D', 'G1', 'G2', 'P', 'W'))
    W2 = gv.gensym_W('w0**2 + w1', 'W2')
    pairs = [(D, P), (G1, P), (G2, P), (D, W), (G1, W), (G2, W), (W, W2),
             (D, G1), (P, W)]
    checks = gv.commutator_table(pairs, 20, rng)
    assert all(c.passed for c in checks), [c.name for c in checks
                                          if not c.passed]


def test_w1_generator_equals_exp_potential(rng):
    P2 = gv.gensym_P(to_riemann_form(TelegraphFn.single(ExpVMode())))
    W1 = gv.gensym_W('w1')
    for _ in range(10):
        j = gv.random_jet(rng)
        np.testing.assert_allclose(W1.partials(j).value, P2.partials(j).value,
                                   atol=1e-12)


def test_generalized_checks_need_second_jet():
    j = JetPoint(0.0, 0.0, RiemannState(0.0, 0.0, 0.0), np.ones(3),
                 np.zeros(3))
    with pytest.raises(DomainError):
        gv.gensym_determining_residual(gv.gensym_D(), j)


# Hamiltonian structure

def test_hamiltonian_jet_identity(rng):
    assert hv.jet_identity_check(rng, samples=50).passed


def test_hamiltonian_on_quad(quad):
    spec = GridSpec((0.6, 0.9), (-0.3, 0.3), 2, 2)
    for lam in hv.LAMBDAS:
        assert hv.hamiltonian_check(quad, lam, spec, threads=1).passed


# Conservation laws

def test_weight_identities_vanish():
    assert all(e == 0 for e in cv.weight_identities())
    assert cv.weights_check().passed


@pytest.mark.parametrize('current', [
    cv.DHC(),
    cv.NonTranslation(),
    cv.EHC(adjoint_form(TelegraphFn.single(QuadMode()))),
    cv.GeneralZeroth('w**2', adjoint_form(TelegraphFn.single(QuadMode()))),
], ids=lambda c: c.NAME)
def test_zeroth_order_pairing(current, rng):
    assert cv.pairing_check(current, rng, samples=20).passed
    r = np.array([0.3, -0.2, 0.7])
    assert cv.pairing_defect(current, 0.4, -0.1, r) < 1e-12


class SkewedCharacteristic(cv.NonTranslation):

    def characteristic(self, t, x, r):
        return super().characteristic(t, x, r) + np.array([0.0, 1e-6, 0.0])


class MisstatedDensity(cv.DHC):

    def rho(self, t, x, r):
        return super().rho(t, x, r) + 1e-6


@pytest.mark.parametrize('current', [SkewedCharacteristic(), MisstatedDensity()],
                         ids=['characteristic', 'density'])
def test_pairing_detects_coding_errors(current, rng):
    assert cv.pairing_defect(current, 0.4, -0.1, np.array([0.3, -0.2, 0.7])) > 1e-7
    assert not cv.pairing_check(current, rng, samples=5).passed


def test_pairing_uses_exact_partials():
    cur = cv.DHC()
    values = cur.pairing(0.4, -0.1, 0.3, -0.2, 0.7, *cur.psi_jet(np.zeros(3)))
    e = np.exp(0.5)
    assert values[0] == pytest.approx(e * 0.7, rel=1e-14)
    assert values[2:5] == pytest.approx([e * 0.7, -e * 0.7, e], rel=1e-14)
    assert values[8] == 0 and values[9] == 0


def test_psi_must_solve_adjoint_equation():
    with pytest.raises(DomainError):
        cv.GeneralZeroth('w', to_riemann_form(TelegraphFn.single(QuadMode())))


def test_c0_needs_nonzero_gradients():
    j = JetPoint(0.0, 0.0, RiemannState(0.0, 0.0, 0.0),
                 np.array([0.0, 1.0, 0.0]), np.zeros(3))
    with pytest.raises(DomainError):
        cv.C0.from_jet(j)
    j = JetPoint(0.0, 0.0, RiemannState(0.0, 0.0, 0.0),
                 np.array([1.0, -1.0, 0.0]), np.zeros(3))
    np.testing.assert_allclose(cv.C0.from_jet(j), [2.0, 0.0])


@pytest.mark.parametrize('current', [
    cv.DHC(),
    cv.C0(),
    cv.C1('w0*w1'),
    cv.WeightedCurrent(0.5, 'w0*w1'),
], ids=lambda c: c.NAME)
def test_currents_conserved_on_quad(quad, current):
    checks = cv.conservation_check(current, quad, WINDOW, n=3, threads=1)
    assert all(c.passed for c in checks), [c.detail for c in checks]


def test_c1_infers_chain_length():
    assert cv.C1('w0 + w3').kappa == 3
    assert cv.C1('w0').kappa == 0


@pytest.mark.parametrize('iota', [0, 1])
def test_omega_chain_on_quad(quad, iota):
    assert cv.omega_chain_check(quad, iota, WINDOW, n=2, threads=1).passed
