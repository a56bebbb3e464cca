"""
First-order generalized symmetries of the diagonal system. A characteristic
is fixed by constants (gamma, zeta1, zeta2), a solution Phi of
2 Phi_12 = Phi_1 - Phi_2 and a polynomial Omega(w0, w1) in
w0 = r3 and w1 = e^{r2 - r1} r3_x:

    eta1 = (gamma x - gamma t V1 - (zeta1 + zeta2) t + Phi + Phi_1) r1_x + zeta1
    eta2 = (gamma x - gamma t V2 - (zeta1 + zeta2) t + Phi - Phi_2) r2_x + zeta2
    eta3 = (gamma x - gamma t V3 - (zeta1 + zeta2) t + Phi) r3_x + Omega

Partials of eta are analytic, so determining equations and commutators
hold to rounding error at arbitrary jets.
"""

from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from src.config import Tolerance
from src.model.charts import RiemannState, char_speeds
from src.model.residuals import JetPoint
from src.telegraph.modes import RiemannForm
from src.util.errors import DomainError
from src.verifiers.results import CheckResult, tolerance_check

OMEGA0, OMEGA1 = sp.symbols('w0 w1')


def omega_poly(expr) -> sp.Poly:
    return sp.Poly(sp.sympify(expr, locals={'w0': OMEGA0, 'w1': OMEGA1}),
                   OMEGA0, OMEGA1)


class EtaPartials(NamedTuple):
    """Value and first partials of a characteristic at a jet;
    d_r[k, j] = d eta^k / d r^j and d_rx[k, j] = d eta^k / d r^j_x."""
    value: np.ndarray
    d_t: np.ndarray
    d_x: np.ndarray
    d_r: np.ndarray
    d_rx: np.ndarray


@dataclass
class GenSymCharacteristic:
    gamma: float = 0.0
    zeta1: float = 0.0
    zeta2: float = 0.0
    phi: Optional[RiemannForm] = None
    omega: sp.Poly = None
    label: str = ''
    kind: str = ''

    def __post_init__(self):
        if self.omega is None:
            self.omega = omega_poly(0)
        expr = self.omega.as_expr()
        args = (OMEGA0, OMEGA1)
        self._omega = sp.lambdify(args, expr, 'numpy')
        self._omega0 = sp.lambdify(args, sp.diff(expr, OMEGA0), 'numpy')
        self._omega1 = sp.lambdify(args, sp.diff(expr, OMEGA1), 'numpy')

    def phi_residual(self, r1, r2) -> float:
        if self.phi is None:
            return 0.0
        return float(np.max(np.abs(self.phi.residual(r1, r2))))

    def _phi(self, r1, r2):
        if self.phi is None:
            return (0.0,) * 6
        return self.phi.partials(r1, r2)

    def partials(self, j: JetPoint) -> EtaPartials:
        r1, r2, r3 = j.state.r1, j.state.r2, j.state.r3
        rx = np.asarray(j.rx, dtype=float)
        t, x = j.t, j.x
        g, z = self.gamma, self.zeta1 + self.zeta2
        V = np.array(char_speeds(r1, r2))
        f, f1, f2, f11, f12, f22 = self._phi(r1, r2)

        base = g * x - g * t * V - z * t
        c = base + np.array([f + f1, f - f2, f])
        e = np.exp(r2 - r1)
        w1 = e * rx[2]
        om = float(self._omega(r3, w1))
        om0 = float(self._omega0(r3, w1))
        om1 = float(self._omega1(r3, w1))

        value = c * rx + np.array([self.zeta1, self.zeta2, om])
        d_t = (-g * V - z) * rx
        d_x = g * rx
        d_r = np.array([
            [(-g * t + f1 + f11) * rx[0], (-g * t + f2 + f12) * rx[0], 0.0],
            [(-g * t + f1 - f12) * rx[1], (-g * t + f2 - f22) * rx[1], 0.0],
            [(-g * t + f1) * rx[2] - w1 * om1,
             (-g * t + f2) * rx[2] + w1 * om1, om0],
        ])
        d_rx = np.diag([c[0], c[1], c[2] + e * om1])
        return EtaPartials(value, d_t, d_x, d_r, d_rx)


def gensym_D() -> GenSymCharacteristic:
    return GenSymCharacteristic(gamma=1.0, label='D', kind='D')


def gensym_G1() -> GenSymCharacteristic:
    return GenSymCharacteristic(zeta1=-1.0, label='G1', kind='G1')


def gensym_G2() -> GenSymCharacteristic:
    return GenSymCharacteristic(zeta1=1.0, zeta2=-1.0, label='G2', kind='G2')


def gensym_P(phi: RiemannForm, label: str = 'P') -> GenSymCharacteristic:
    return GenSymCharacteristic(phi=phi, label=label, kind='P')


def gensym_W(omega, label: str = 'W') -> GenSymCharacteristic:
    if not isinstance(omega, sp.Poly):
        omega = omega_poly(omega)
    return GenSymCharacteristic(omega=omega, label=label, kind='W')


def _require_rxx(j: JetPoint) -> np.ndarray:
    if j.rxx is None:
        raise DomainError('generalized symmetry checks need rxx on the jet')
    return np.asarray(j.rxx, dtype=float)


def total_x(p: EtaPartials, j: JetPoint) -> np.ndarray:
    """D_x eta restricted to first-order characteristics."""
    rx = np.asarray(j.rx, dtype=float)
    return p.d_x + p.d_r @ rx + p.d_rx @ _require_rxx(j)


def gensym_determining_residual(c: GenSymCharacteristic,
                                j: JetPoint) -> np.ndarray:
    """Invariance residuals (R1, R2, R3) with r_t eliminated by the system."""
    p = c.partials(j)
    rx = np.asarray(j.rx, dtype=float)
    rxx = _require_rxx(j)
    V = np.array(char_speeds(j.state.r1, j.state.r2))
    rt = -V * rx
    rxt = -(rx[0] + rx[1]) * rx - V * rxx
    dt_eta = p.d_t + p.d_r @ rt + p.d_rx @ rxt
    dx_eta = total_x(p, j)
    return dt_eta + (p.value[0] + p.value[1]) * rx + V * dx_eta


def commutator_value(a: GenSymCharacteristic, b: GenSymCharacteristic,
                     j: JetPoint) -> np.ndarray:
    """Characteristic of [Q_a, Q_b] = pr Q_a(eta_b) - pr Q_b(eta_a)."""
    pa, pb = a.partials(j), b.partials(j)
    dxa, dxb = total_x(pa, j), total_x(pb, j)
    return (pb.d_r @ pa.value + pb.d_rx @ dxa
            - pa.d_r @ pb.value - pa.d_rx @ dxb)


def random_jet(rng: np.random.Generator, scale: float = 1.0) -> JetPoint:
    """Jet with independent coordinates; r_t is left on the system."""
    r = rng.uniform(-scale, scale, 3)
    rx = rng.uniform(-scale, scale, 3)
    rxx = rng.uniform(-scale, scale, 3)
    t, x = rng.uniform(-scale, scale, 2)
    V = np.array(char_speeds(r[0], r[1]))
    return JetPoint(float(t), float(x), RiemannState(*r), rx, -V * rx, rxx)


def determining_check(chars: Sequence[GenSymCharacteristic], jets: int,
                      rng: np.random.Generator) -> CheckResult:
    samples = [random_jet(rng) for _ in range(jets)]
    worst = 0.0
    for c in chars:
        for j in samples:
            r = gensym_determining_residual(c, j)
            worst = max(worst, float(np.max(np.abs(r))))
    return tolerance_check('gensym/determining', worst, Tolerance.GENSYM,
                           characteristics=[c.label for c in chars],
                           jets=jets)


# Commutation relations with the right-hand sides they must match.

def _w1_d_omega1(omega: sp.Poly) -> sp.Poly:
    return omega_poly(OMEGA1 * sp.diff(omega.as_expr(), OMEGA1))


def _w_bracket(o1: sp.Poly, o2: sp.Poly) -> sp.Poly:
    e1, e2 = o1.as_expr(), o2.as_expr()
    expr = (sp.diff(e1, OMEGA0) * (OMEGA1 * sp.diff(e2, OMEGA1) - e2)
            - sp.diff(e2, OMEGA0) * (OMEGA1 * sp.diff(e1, OMEGA1) - e1))
    return omega_poly(sp.expand(expr))


def expected_commutator(a: GenSymCharacteristic,
                        b: GenSymCharacteristic) -> Optional[GenSymCharacteristic]:
    """Right-hand side of [a, b] for pairs of named fields; None means zero."""
    kinds = (a.kind, b.kind)
    if kinds == ('D', 'P'):
        return gensym_P(b.phi, 'P')
    if kinds == ('G1', 'P'):
        return gensym_P(b.phi.diff1().scaled(-1.0), 'P')
    if kinds == ('G2', 'P'):
        return gensym_P(b.phi.diff1() + b.phi.diff2().scaled(-1.0), 'P')
    if kinds in (('D', 'W'), ('G1', 'W')):
        return gensym_W(_w1_d_omega1(b.omega))
    if kinds == ('G2', 'W'):
        return gensym_W(_w1_d_omega1(b.omega) * -2)
    if kinds == ('W', 'W'):
        return gensym_W(_w_bracket(a.omega, b.omega))
    return None


def commutator_defect(a: GenSymCharacteristic, b: GenSymCharacteristic,
                      jets: Sequence[JetPoint]) -> float:
    rhs, sign = expected_commutator(a, b), 1.0
    if rhs is None:
        rhs, sign = expected_commutator(b, a), -1.0
    worst = 0.0
    for j in jets:
        got = commutator_value(a, b, j)
        want = sign * rhs.partials(j).value if rhs is not None else np.zeros(3)
        worst = max(worst, float(np.max(np.abs(got - want))))
    return worst


def commutator_table(pairs: Sequence[Tuple[GenSymCharacteristic,
                                           GenSymCharacteristic]],
                     jets: int, rng: np.random.Generator) -> List[CheckResult]:
    samples = [random_jet(rng) for _ in range(jets)]
    out = []
    for a, b in pairs:
        defect = commutator_defect(a, b, samples)
        out.append(tolerance_check(f'gensym/[{a.label}, {b.label}]', defect,
                                   Tolerance.COMMUTATOR))
    return out


def named_characteristics(phi: RiemannForm, omega='w0*w1') -> Dict[str, GenSymCharacteristic]:
    return {
        'D': gensym_D(),
        'G1': gensym_G1(),
        'G2': gensym_G2(),
        'P': gensym_P(phi),
        'W': gensym_W(omega),
    }
