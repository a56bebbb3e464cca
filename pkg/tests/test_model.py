import numpy as np
import pytest

from src.model.charts import (
    CHART, PhysState, RiemannState, UVWState, char_speeds, from_riemann,
    from_uvw, to_riemann, to_uvw
)
from src.model.residuals import (
    JetPoint, UVWJet, fd_jet, residual_riemann, residual_uvw, to_riemann_jet,
    to_uvw_jet
)
from src.util.errors import DomainError, SingularChartError


def test_physical_chart():
    s = to_uvw(PhysState(1.0, 1.0, 0.3))
    assert s.u == 0.3
    assert s.v == pytest.approx(np.log(2.0))
    assert s.w == 1.0
    back = from_uvw(s)
    assert back.rho1 == pytest.approx(1.0)
    assert back.rho2 == pytest.approx(1.0)


@pytest.mark.parametrize('rho1, rho2', [(0.0, 1.0), (1.0, -2.0)])
def test_physical_state_needs_positive_densities(rho1, rho2):
    with pytest.raises(DomainError):
        PhysState(rho1, rho2, 0.0)


def test_w_minus_one_has_no_physical_preimage():
    with pytest.raises(SingularChartError):
        from_uvw(UVWState(0.0, 0.0, -1.0))


def test_riemann_chart():
    r = to_riemann(UVWState(1.0, -0.5, 2.0))
    assert (r.r1, r.r2, r.r3) == (0.25, 0.75, 2.0)
    assert from_riemann(r) == UVWState(1.0, -0.5, 2.0)


def test_chart_round_trips_on_random_states(rng):
    rho = rng.uniform(0.1, 10.0, (10_000, 2))
    u = rng.uniform(-3.0, 3.0, 10_000)
    for (rho1, rho2), uu in zip(rho, u):
        p = PhysState(float(rho1), float(rho2), float(uu))
        s = to_uvw(p)
        back = from_uvw(s)
        np.testing.assert_allclose([back.rho1, back.rho2, back.u],
                                   [p.rho1, p.rho2, p.u], rtol=1e-12)
        again = from_riemann(to_riemann(s))
        np.testing.assert_allclose(again.as_array(), s.as_array(),
                                   rtol=1e-12, atol=1e-14)


def test_char_speeds():
    assert char_speeds(0.25, 0.75) == (2.0, 0.0, 1.0)
    V1, V2, V3 = char_speeds(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
    np.testing.assert_array_equal(V1 - V2, [2.0, 2.0])


def test_residual_of_pure_time_derivative():
    j = UVWJet(0.0, 0.0, UVWState(0.0, 0.0, 0.0), np.zeros(3),
               np.array([1.0, 0.0, 0.0]))
    np.testing.assert_array_equal(residual_uvw(j), [1.0, 0.0, 0.0])


def test_jet_charts_agree_on_residual():
    j = UVWJet(0.3, -0.1, UVWState(0.4, -0.2, 1.5),
               np.array([0.1, -0.3, 0.7]), np.array([0.2, 0.5, -0.4]))
    jr = to_riemann_jet(j)
    r_uvw = residual_uvw(j)
    r_riem = residual_riemann(jr)
    # the Riemann residual is the chart image of the (u, v, w) residual
    np.testing.assert_allclose(r_riem[:2],
                               [0.5 * (r_uvw[0] + r_uvw[1]),
                                0.5 * (r_uvw[0] - r_uvw[1])], atol=1e-14)
    assert r_riem[2] == pytest.approx(r_uvw[2])
    back = to_uvw_jet(jr)
    np.testing.assert_allclose(back.sx, j.sx)
    np.testing.assert_allclose(back.st, j.st)


def test_riemann_residual_mixes_uvw_residual_on_random_jets(rng):
    for _ in range(200):
        u, v = rng.uniform(-3.0, 3.0, 2)
        w = rng.uniform(0.1, 10.0)
        j = UVWJet(0.0, 0.0, UVWState(float(u), float(v), float(w)),
                   rng.normal(size=3), rng.normal(size=3))
        np.testing.assert_allclose(residual_riemann(to_riemann_jet(j)),
                                   CHART @ residual_uvw(j), atol=1e-12)


def test_riemann_residual_of_travelling_invariants():
    r = RiemannState(0.2, 0.1, 1.0)
    rx = np.array([1.0, -2.0, 0.5])
    V = np.array(char_speeds(r.r1, r.r2))
    j = JetPoint(0.0, 0.0, r, rx, -V * rx)
    np.testing.assert_allclose(residual_riemann(j), 0.0, atol=1e-15)


def test_fd_jet_of_linear_field():
    def evaluate(t, x):
        return UVWState(2.0 * t + x, -x, 3.0 * t)

    j = fd_jet(evaluate, 0.5, 0.25)
    np.testing.assert_allclose(j.sx, [1.0, -1.0, 0.0], atol=1e-9)
    np.testing.assert_allclose(j.st, [2.0, 0.0, 3.0], atol=1e-9)
