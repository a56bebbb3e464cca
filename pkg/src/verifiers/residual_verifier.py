"""
Pointwise PDE residuals of exact solutions on sample windows, the rank
trichotomy of the complete solution and the regular/generalized-hodograph
equivalence.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np

from src.config import Config, Newton, Tolerance
from src.model.charts import UVWState
from src.model.residuals import residual_uvw
from src.solutions.base import ExactSolution
from src.solutions.hodograph import (
    GenHodographSolution, RegularSolution, jacobian_rank
)
from src.solutions.sampling import GridSpec, sample_to_grid
from src.verifiers.results import CheckResult, tolerance_check

Window = Tuple[Tuple[float, float], Tuple[float, float]]

EXPECTED_RANK = {'regular': 2, 'genhodograph': 2, 'singular': 1, 'ultra': 0}


def _row_jets(sol: ExactSolution, t: float, xs, states, analytic: bool):
    jets = []
    for x, state in zip(xs, states):
        guess = sol.guess_from(state)
        jets.append(sol.jet(t, x, guess) if analytic
                    else sol.fd_jet(t, x, guess))
    return jets


def grid_jets(sol: ExactSolution, spec: GridSpec, analytic: bool = True,
              threads: Optional[int] = None) -> List[List]:
    """Jets at every grid node, seeded by a continuation sample."""
    sample = sample_to_grid(sol, spec, threads)
    states = [[UVWState(*values) for values in row] for row in sample.uvw]
    with ThreadPoolExecutor(max_workers=threads or Config.THREADS) as executor:
        futures = [
            executor.submit(_row_jets, sol, t, sample.x, states[i], analytic)
            for i, t in enumerate(sample.t)
        ]
        return [future.result() for future in futures]


def residual_grid(sol: ExactSolution, spec: GridSpec, analytic: bool = True,
                  threads: Optional[int] = None) -> np.ndarray:
    jets = grid_jets(sol, spec, analytic, threads)
    return np.array([[residual_uvw(j) for j in row] for row in jets])


def residual_check(sol: ExactSolution, spec: GridSpec, analytic: bool = True,
                   threads: Optional[int] = None) -> CheckResult:
    analytic = analytic and sol.ANALYTIC_JET
    res = residual_grid(sol, spec, analytic, threads)
    tol = Tolerance.ANALYTIC_RESIDUAL if analytic else Tolerance.FD_RESIDUAL
    label = 'analytic' if analytic else 'fd'
    return tolerance_check(f'residual/{sol.FAMILY}/{label}',
                           float(np.max(np.abs(res))), tol,
                           grid=[spec.nt, spec.nx],
                           multiple_roots=len(sol.multiple_roots))


def trichotomy_check(sol: ExactSolution, spec: GridSpec,
                     threads: Optional[int] = None) -> Optional[CheckResult]:
    """Rank of (u, v) as a map of (t, x) against the family it belongs to."""
    expected = EXPECTED_RANK.get(sol.FAMILY)
    if expected is None:
        return None
    jets = grid_jets(sol, spec, sol.ANALYTIC_JET, threads)
    ranks = [jacobian_rank(j, Tolerance.TRICHOTOMY) for row in jets for j in row]
    dets = [abs(r['det']) for r in ranks]
    if expected == 2:
        value = min(dets)
        passed = value > Newton.DEGENERACY_TOL
    elif expected == 1:
        value = max(dets)
        passed = value <= Tolerance.TRICHOTOMY \
            and max(r['grad'] for r in ranks) > Tolerance.TRICHOTOMY
    else:
        value = max(r['grad'] for r in ranks)
        passed = value == 0.0
    return CheckResult(f'trichotomy/{sol.FAMILY}', value,
                       Tolerance.TRICHOTOMY, bool(passed), 'tolerance',
                       {'expected_rank': expected})


def equivalence_check(reg: RegularSolution, window: Window, points: int,
                      rng: np.random.Generator) -> CheckResult:
    """Regular and generalized-hodograph evaluators on the same points."""
    gen = GenHodographSolution.from_regular(reg)
    (t0, t1), (x0, x1) = window
    centre = reg.evaluate(0.5 * (t0 + t1), 0.5 * (x0 + x1))
    reg_hint, gen_hint = reg.guess_from(centre), gen.guess_from(centre)
    worst = 0.0
    for t, x in zip(rng.uniform(t0, t1, points), rng.uniform(x0, x1, points)):
        a = reg.evaluate(t, x, reg_hint).as_array()
        b = gen.evaluate(t, x, gen_hint).as_array()
        worst = max(worst, float(np.max(np.abs(a - b))))
    return tolerance_check('equivalence/regular-genhodograph', worst,
                           Tolerance.EQUIVALENCE, points=points)
