import numpy as np
import pytest

from src.config import Solver
from src.solutions.sampling import sample_field
from src.solvers.grid import GridField
from src.solvers.upwind_solver import (
    SolverConfig, convergence_study, dhc_integral, l1_error, solve,
    stable_dt, step
)
from src.util.errors import BlowUpError, DomainError


def constant_field(n=10, state=(0.2, 0.1, 0.5)):
    return GridField(0.0, 1.0 / n, np.tile(state, (n, 1)))


def test_constant_field_is_stationary():
    init = constant_field()
    final, snaps = solve(init, SolverConfig(t_end=0.1, snapshots=2))
    np.testing.assert_allclose(final.cells, init.cells, atol=1e-15)
    assert final.time == pytest.approx(0.1)
    assert len(snaps) == 2
    assert snaps[0].time == pytest.approx(0.05)


def test_stable_dt_uses_fastest_family():
    f = constant_field()
    # V = (1.3, -0.7, 0.3)
    assert stable_dt(f, 0.5) == pytest.approx(0.5 * 0.1 / 1.3)


def test_oversized_step_blows_up():
    cells = np.zeros((8, 3))
    cells[1::2, 0] = 1.0
    f = GridField(0.0, 0.125, cells)
    with pytest.raises(BlowUpError):
        step(f, SolverConfig(t_end=1.0), dt=5 * f.dx)


@pytest.mark.parametrize('kwargs', [
    {'cfl': 0.0},
    {'cfl': 1.5},
    {'boundary': 'reflecting'},
    {'boundary': 'exact'},
])
def test_solver_config_validation(kwargs):
    with pytest.raises(DomainError):
        SolverConfig(t_end=1.0, **kwargs)


def test_grid_field_validation():
    with pytest.raises(DomainError):
        GridField(0.0, 0.1, np.zeros((3, 3)))
    with pytest.raises(DomainError):
        GridField(0.0, 0.0, np.zeros((8, 3)))
    with pytest.raises(DomainError):
        GridField(0.0, 0.1, np.zeros((8, 2)))


def test_backwards_time_is_rejected():
    f = constant_field()
    f.time = 1.0
    with pytest.raises(DomainError):
        solve(f, SolverConfig(t_end=0.5))


def test_l1_error_and_dhc_integral():
    f = constant_field()
    np.testing.assert_array_equal(l1_error(f, f.copy()), np.zeros(3))
    assert dhc_integral(f) == pytest.approx(0.5 * np.exp(0.1))
    with pytest.raises(DomainError):
        l1_error(f, constant_field(n=12))


def test_l1_error_against_exact_solution(quad):
    f = sample_field(quad, 0.5, (-0.5, 0.5), 16)
    np.testing.assert_allclose(l1_error(f, quad), 0.0, atol=1e-12)


def test_exact_boundary_tracks_quad_solution(quad):
    init = sample_field(quad, 0.5, (-0.5, 0.5), 64)
    cfg = SolverConfig(t_end=0.55, boundary='exact', exact=quad)
    final, _ = solve(init, cfg)
    assert final.time == pytest.approx(0.55)
    assert np.sum(l1_error(final, quad)) < 1e-2


def test_upwind_converges_on_quad(quad):
    cfg = SolverConfig(t_end=0.6, boundary='exact', exact=quad)
    study = convergence_study(quad, cfg, 0.5, (-0.5, 0.5))
    totals = [row['total'] for row in study['table']]
    assert totals[0] > totals[1] > totals[2] > 0
    assert 0.8 <= study['order'] <= 1.2
    assert Solver.ORDER_WINDOW == (0.8, 1.2)
    assert [row['cells'] for row in study['table']] == [64, 128, 256]
    assert [row['dx'] for row in study['table']] == pytest.approx(
        [1 / 64, 1 / 128, 1 / 256])
