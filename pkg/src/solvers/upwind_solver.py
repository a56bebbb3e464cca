"""
First-order upwind finite-volume scheme for the diagonal system

    r^k_t + V^k(r1, r2) r^k_x = 0,  V = (r1 + r2 + 1, r1 + r2 - 1, r1 + r2),

used as an independent check of the exact solutions.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.config import Solver
from src.model.charts import RiemannState, char_speeds, from_riemann, to_riemann
from src.solutions.base import ExactSolution
from src.solutions.sampling import sample_field
from src.solvers.grid import GridField
from src.util.errors import BlowUpError, DomainError
from src.util.utils import fit_order

BOUNDARIES = ('periodic', 'exact')
MAX_PRINCIPLE_SLACK = 1e-12


@dataclass
class SolverConfig:
    t_end: float
    cfl: float = Solver.CFL
    boundary: str = 'periodic'
    exact: Optional[ExactSolution] = field(default=None, repr=False)
    snapshots: int = 0

    def __post_init__(self):
        if not 0 < self.cfl <= 1:
            raise DomainError(f'cfl must lie in (0, 1], got {self.cfl}')
        if self.boundary not in BOUNDARIES:
            raise DomainError(f'unknown boundary {self.boundary!r}')
        if self.boundary == 'exact' and self.exact is None:
            raise DomainError('exact-inflow boundary needs an exact solution')


def speeds(cells: np.ndarray) -> np.ndarray:
    return np.stack(char_speeds(cells[:, 0], cells[:, 1]), axis=1)


def stable_dt(f: GridField, cfl: float) -> float:
    vmax = float(np.max(np.abs(speeds(f.cells))))
    return np.inf if vmax == 0.0 else cfl * f.dx / vmax


def _exact_ghost(sol: ExactSolution, t: float, x: float,
                 neighbour: np.ndarray) -> np.ndarray:
    hint = sol.guess_from(from_riemann(RiemannState(*neighbour)))
    return to_riemann(sol.evaluate(t, x, hint)).as_array()


def _neighbours(f: GridField, cfg: SolverConfig) -> Tuple[np.ndarray, np.ndarray]:
    r = f.cells
    if cfg.boundary == 'periodic':
        return np.roll(r, 1, axis=0), np.roll(r, -1, axis=0)
    left = np.empty_like(r)
    right = np.empty_like(r)
    left[1:], right[:-1] = r[:-1], r[1:]
    left[0] = _exact_ghost(cfg.exact, f.time, f.x0 - 0.5 * f.dx, r[0])
    right[-1] = _exact_ghost(cfg.exact, f.time,
                             f.x0 + f.length + 0.5 * f.dx, r[-1])
    return left, right


def step(f: GridField, cfg: SolverConfig,
         dt: Optional[float] = None) -> GridField:
    """One upwind step; dt defaults to the CFL-limited step."""
    if dt is None:
        dt = stable_dt(f, cfg.cfl)
        if not np.isfinite(dt):
            return GridField(f.x0, f.dx, f.cells.copy(), cfg.t_end)
    r = f.cells
    left, right = _neighbours(f, cfg)
    V = speeds(r)
    nu = dt / f.dx
    new = r - nu * (np.maximum(V, 0.0) * (r - left)
                    + np.minimum(V, 0.0) * (right - r))

    if not np.all(np.isfinite(new)):
        raise BlowUpError(f'non-finite state at t = {f.time + dt:.6g}')
    lo = np.minimum(np.minimum(left, r), right)
    hi = np.maximum(np.maximum(left, r), right)
    slack = MAX_PRINCIPLE_SLACK * (1.0 + np.abs(r))
    if np.any(new < lo - slack) or np.any(new > hi + slack):
        raise BlowUpError(
            f'maximum principle violated at t = {f.time + dt:.6g}'
        )
    return GridField(f.x0, f.dx, new, f.time + dt)


def solve(init: GridField,
          cfg: SolverConfig) -> Tuple[GridField, List[GridField]]:
    """March to cfg.t_end; the last step is shortened to land on it."""
    f = init.copy()
    snapshots: List[GridField] = []
    if cfg.t_end < f.time:
        raise DomainError(f't_end = {cfg.t_end} precedes t = {f.time}')
    targets = list(np.linspace(f.time, cfg.t_end, cfg.snapshots + 1)[1:]) \
        if cfg.snapshots > 0 else []
    while f.time < cfg.t_end:
        dt = min(stable_dt(f, cfg.cfl), cfg.t_end - f.time)
        if targets:
            dt = min(dt, targets[0] - f.time)
        f = step(f, cfg, dt)
        if targets and f.time >= targets[0]:
            snapshots.append(f.copy())
            targets.pop(0)
        if cfg.t_end - f.time <= 1e-14 * max(1.0, abs(cfg.t_end)):
            f.time = cfg.t_end
    return f, snapshots


def l1_error(f: GridField,
             ref: Union[GridField, ExactSolution]) -> np.ndarray:
    """Per-component discrete L1 distance, dx * sum |f - ref|."""
    if isinstance(ref, GridField):
        if ref.n != f.n or ref.dx != f.dx:
            raise DomainError('fields live on different grids')
        other = ref.cells
    else:
        other = sample_field(ref, f.time, (f.x0, f.x0 + f.length), f.n).cells
    return f.dx * np.sum(np.abs(f.cells - other), axis=0)


def dhc_integral(f: GridField) -> float:
    """Discrete integral of e^{r1 - r2} r3."""
    r = f.cells
    return float(f.dx * np.sum(np.exp(r[:, 0] - r[:, 1]) * r[:, 2]))


def convergence_study(sol: ExactSolution, cfg: SolverConfig,
                      t_start: float, x_range: Tuple[float, float],
                      cells: Sequence[int] = Solver.CONVERGENCE_CELLS) -> Dict:
    """L1 errors against `sol` after evolving its own initial data."""
    table = []
    for n in cells:
        init = sample_field(sol, t_start, x_range, n)
        final, _ = solve(init, cfg)
        err = l1_error(final, sol)
        table.append({'cells': n, 'dx': init.dx,
                      'l1': [float(e) for e in err],
                      'total': float(np.sum(err))})
    totals = [row['total'] for row in table]
    order = fit_order([row['dx'] for row in table], totals) \
        if all(e > 0 for e in totals) else float('inf')
    return {'table': table, 'order': order}
