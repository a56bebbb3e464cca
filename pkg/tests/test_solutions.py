import numpy as np
import pytest

from src.model.residuals import residual_uvw
from src.solutions.hodograph import (
    GenHodographSolution, RegularSolution, SingularSolution,
    UltraSingularSolution, jacobian_rank
)
from src.solutions.reductions import (
    PartialInvariant5A, PartialInvariant5B, Reduction1A, Reduction1B,
    Reduction2A, Reduction2B, Reduction3, make_reduction
)
from src.solutions.sampling import GridSampler, GridSpec, sample_field
from src.telegraph.functions import AffineFn, PolyTheta, TanhFn
from src.telegraph.modes import LinUMode, QuadMode, TelegraphFn
from src.util.errors import (
    DegenerateFamilyError, DomainError, NoSolutionError
)
from tests.conftest import quad_state

POINTS = [(0.5, -0.5), (0.75, 0.0), (1.0, 0.4)]


@pytest.mark.parametrize('t, x', POINTS)
def test_quad_regular_matches_closed_form(quad, t, x):
    np.testing.assert_allclose(quad.evaluate(t, x).as_array(),
                               quad_state(t, x), rtol=1e-10, atol=1e-12)
    assert np.max(np.abs(residual_uvw(quad.jet(t, x)))) < 1e-10


def test_quad_regular_oracle_value(quad):
    s = quad.evaluate(2.0, 0.0)
    assert s.u == pytest.approx(1.0)
    assert s.v == pytest.approx(-0.5)
    assert s.w == pytest.approx(2.0 * np.exp(-0.5))


def test_analytic_and_fd_jets_agree(quad):
    analytic, fd = quad.jet(0.75, 0.1), quad.fd_jet(0.75, 0.1)
    np.testing.assert_allclose(analytic.sx, fd.sx, atol=1e-7)
    np.testing.assert_allclose(analytic.st, fd.st, atol=1e-7)


@pytest.mark.parametrize('t, x', POINTS)
def test_genhodograph_reproduces_regular(quad, t, x):
    gen = GenHodographSolution.from_regular(quad)
    np.testing.assert_allclose(gen.evaluate(t, x).as_array(),
                               quad.evaluate(t, x).as_array(), atol=1e-9)
    assert np.max(np.abs(residual_uvw(gen.jet(t, x)))) < 1e-9


def test_genhodograph_carries_W():
    reg = RegularSolution(TelegraphFn.single(QuadMode()), W=AffineFn(2.0, 1.0),
                          guess=(0.5, -1.0))
    gen = GenHodographSolution.from_regular(reg)
    expected = reg.evaluate(0.8, 0.1).as_array()
    np.testing.assert_allclose(gen.evaluate(0.8, 0.1).as_array(), expected,
                               atol=1e-9)


def test_regular_validity_window():
    sol = RegularSolution(TelegraphFn.single(QuadMode()), guess=(0.5, -1.0),
                          validity=((-0.1, 0.1), (-5.0, 5.0)))
    with pytest.raises(NoSolutionError):
        sol.evaluate(1.0, 0.0)


def test_degenerate_potential():
    sol = RegularSolution(TelegraphFn.single(LinUMode()))
    with pytest.raises(DegenerateFamilyError):
        sol.evaluate(0.5, 0.0)


def test_singular_with_zero_theta():
    sol = SingularSolution(1, 0.2)
    s = sol.evaluate(1.0, 0.3)
    assert s.u == pytest.approx(-0.7)
    assert s.v == pytest.approx(-0.5)
    assert s.w == pytest.approx(np.exp(-0.7))
    assert np.max(np.abs(residual_uvw(sol.jet(1.0, 0.3)))) < 1e-10
    assert sol.multiple_roots == set()


def test_singular_flags_multiple_roots():
    sol = SingularSolution(1, theta=PolyTheta([1.0, 0.0, 0.5]))
    u, multiple = sol.solve_u(0.01, 0.2)
    assert multiple
    assert u > 5.0
    sol.evaluate(0.01, 0.2)
    sol.jet(0.01, 0.2)
    assert sol.multiple_roots == {(0.01, 0.2)}


def test_singular_needs_sign():
    with pytest.raises(DomainError):
        SingularSolution(2)


def test_ultra_singular():
    sol = UltraSingularSolution(0.3, -0.2, W=TanhFn())
    s = sol.evaluate(1.0, 0.5)
    assert (s.u, s.v) == (0.3, -0.2)
    assert s.w == pytest.approx(np.tanh(0.2))
    assert np.max(np.abs(residual_uvw(sol.jet(1.0, 0.5)))) < 1e-14


def test_jacobian_rank_trichotomy(quad):
    assert jacobian_rank(quad.jet(0.75, 0.0))['rank'] == 2
    assert jacobian_rank(SingularSolution(1).jet(1.0, 0.3))['rank'] == 1
    assert jacobian_rank(UltraSingularSolution(0.1).jet(1.0, 0.3))['rank'] == 0


REDUCTIONS = [
    (Reduction1A(a=0.0, b=-1.0, mu=0.0, psi=TanhFn()), (1.2, 0.3)),
    (Reduction1A(a=0.0, b=0.0, mu=1.0, delta1=0.5), (1.2, 0.3)),
    (Reduction1B(a=0.0, b=0.0, delta1=0.5), (1.0, 0.2)),
    (PartialInvariant5B(a=0.0, b=0.0, psi=TanhFn()), (1.0, 0.2)),
    (Reduction2A(b=0.0, delta1=0.5), (1.0, -1.0)),
    (Reduction2A(b=1.0, delta1=0.5, singular=True), (1.0, 0.3)),
    (Reduction2B(b=0.5, delta1=0.5, c1=1.0), (1.0, 0.0)),
    (Reduction3(delta1=0.5, delta2=1.0), (0.5, 1.0)),
    (Reduction3(delta1=0.3, phi0=0.5), (0.5, 1.0)),
    (Reduction3(psi=TanhFn()), (0.5, 0.4)),
    (PartialInvariant5A(a=0.0, b=0.0, psi=TanhFn()), (1.2, 0.3)),
]


@pytest.mark.parametrize('sol, point', REDUCTIONS,
                         ids=[f'{s.TAG}-{i}' for i, (s, _) in
                              enumerate(REDUCTIONS)])
def test_reductions_solve_the_system(sol, point):
    t, x = point
    jet = sol.jet(t, x)
    assert np.max(np.abs(residual_uvw(jet))) < 1e-7
    fd = sol.fd_jet(t, x)
    np.testing.assert_allclose(jet.sx, fd.sx, atol=1e-6)
    np.testing.assert_allclose(jet.st, fd.st, atol=1e-6)


def test_reduction_1a_logarithmic_v():
    s = Reduction1A(c2=0.5).evaluate(2.0, 1.0)
    assert s.u == pytest.approx(0.5)
    assert s.v == pytest.approx(0.5 - np.log(2.0))


def test_reduction_errors():
    with pytest.raises(DomainError):
        make_reduction('9Z')
    with pytest.raises(DomainError):
        Reduction1A(a=0.0, b=0.0, mu=0.5)
    with pytest.raises(DomainError):
        Reduction1A().jet(0.0, 1.0)
    with pytest.raises(DomainError):
        Reduction1B(a=0.0, b=0.0, interval=(0.5, 2.0))
    with pytest.raises(DomainError):
        Reduction2A(b=0.0, delta1=0.5).evaluate(1.0, 5.0)
    with pytest.raises(DomainError):
        Reduction3(delta1=1.0, phi0=0.0)


def test_make_reduction_builds_by_tag():
    sol = make_reduction('2B', b=0.5, delta1=0.5)
    assert isinstance(sol, Reduction2B)
    assert sol.describe()['tag'] == '2B'


def test_grid_sampler(quad):
    spec = GridSpec((0.5, 1.0), (-0.5, 0.5), 3, 4)
    sample = GridSampler(threads=2).sample_to_grid(quad, spec)
    assert sample.uvw.shape == (3, 4, 3)
    rows = sample.rows()
    assert len(rows) == 12
    t, x = rows[5][:2]
    np.testing.assert_allclose(rows[5][2:5], quad_state(t, x), rtol=1e-10)
    r1, r2 = rows[5][5:7]
    assert r1 == pytest.approx(0.5 * (rows[5][2] + rows[5][3]))
    assert r2 == pytest.approx(0.5 * (rows[5][2] - rows[5][3]))


def test_sampling_error_names_the_cell():
    with pytest.raises(DomainError, match=r'cell \(0, 0\)'):
        GridSampler(threads=1).sample_to_grid(
            Reduction1A(), GridSpec((0.0, 1.0), (0.0, 1.0), 2, 2))


def test_sample_field(quad):
    field = sample_field(quad, 0.5, (-0.5, 0.5), 8)
    assert field.n == 8
    assert field.dx == pytest.approx(0.125)
    assert field.time == 0.5
    u, v = quad_state(0.5, field.centers[0])[:2]
    assert field.cells[0, 0] == pytest.approx(0.5 * (u + v))
