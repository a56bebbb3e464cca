"""
Evaluation of exact solutions on grids. Rows of a (t, x) grid are sampled
concurrently; inside a row each cell starts Newton from its left neighbour.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from src.config import Config
from src.model.charts import UVWState, to_riemann
from src.solutions.base import ExactSolution
from src.solvers.grid import GridField
from src.util.errors import DriftFluxError
from src.util.utils import progress_bar


@dataclass
class GridSpec:
    t: Tuple[float, float]
    x: Tuple[float, float]
    nt: int
    nx: int

    def nodes(self) -> Tuple[np.ndarray, np.ndarray]:
        return (np.linspace(self.t[0], self.t[1], self.nt),
                np.linspace(self.x[0], self.x[1], self.nx))


@dataclass
class GridSample:
    """States in the (u, v, w) chart, shape (nt, nx, 3)."""
    t: np.ndarray
    x: np.ndarray
    uvw: np.ndarray

    @property
    def riemann(self) -> np.ndarray:
        r = np.empty_like(self.uvw)
        r[..., 0] = 0.5 * (self.uvw[..., 0] + self.uvw[..., 1])
        r[..., 1] = 0.5 * (self.uvw[..., 0] - self.uvw[..., 1])
        r[..., 2] = self.uvw[..., 2]
        return r

    def rows(self) -> List[List[float]]:
        """Flat table with the CSV column order t, x, u, v, w, r1, r2, r3."""
        r = self.riemann
        out = []
        for i, t in enumerate(self.t):
            for j, x in enumerate(self.x):
                out.append([t, x, *self.uvw[i, j], *r[i, j]])
        return out


def _sample_line(sol: ExactSolution, points, label):
    """Evaluate along (t, x) points with continuation; errors name the cell."""
    values = np.empty((len(points), 3))
    guess = None
    for j, (t, x) in enumerate(points):
        try:
            state = sol.evaluate(t, x, guess)
        except DriftFluxError as e:
            raise type(e)(
                f'{label(j)} at (t, x) = ({t:.6g}, {x:.6g}): {e}'
            ) from e
        values[j] = state.as_array()
        guess = sol.guess_from(state)
    return values


class GridSampler:

    MAX_WORKERS = Config.THREADS

    def __init__(self, *args, **kwargs):
        self.max_workers = kwargs.get('threads', self.MAX_WORKERS)
        self.verbose = kwargs.get('verbose', False)

    def _sample_row(self, sol, i, t, xs):
        return _sample_line(sol, [(t, x) for x in xs],
                            lambda j: f'cell ({i}, {j})')

    def sample_to_grid(self, sol: ExactSolution, spec: GridSpec) -> GridSample:
        ts, xs = spec.nodes()
        uvw = np.empty((len(ts), len(xs), 3))
        pbar = progress_bar(len(ts), f'Sampling {sol.FAMILY} solution') \
            if self.verbose else None
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            futures = [
                executor.submit(self._sample_row, sol, i, t, xs)
                for i, t in enumerate(ts)
            ]
            try:
                for i, future in enumerate(futures):
                    uvw[i] = future.result()
                    if pbar is not None:
                        pbar.update(1)
            finally:
                if pbar is not None:
                    pbar.close()
        return GridSample(ts, xs, uvw)


def sample_to_grid(sol: ExactSolution, spec: GridSpec,
                   threads: Optional[int] = None) -> GridSample:
    return GridSampler(threads=threads or Config.THREADS).sample_to_grid(sol, spec)


def sample_field(sol: ExactSolution, t: float, x_range: Tuple[float, float],
                 cells: int) -> GridField:
    """Exact solution at the cell centres of a uniform grid."""
    x0, x1 = x_range
    dx = (x1 - x0) / cells
    centers = x0 + (np.arange(cells) + 0.5) * dx
    uvw = _sample_line(sol, [(t, x) for x in centers], lambda j: f'cell {j}')
    r = np.array([to_riemann(UVWState(*row)).as_array() for row in uvw])
    return GridField(x0, dx, r, t)
