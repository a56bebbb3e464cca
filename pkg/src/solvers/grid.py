from dataclasses import dataclass
from typing import List

import numpy as np

from src.config import Solver
from src.model.charts import RiemannState
from src.util.errors import DomainError


@dataclass
class GridField:
    """Cell averages of (r1, r2, r3) on a uniform grid at one time level."""
    x0: float
    dx: float
    cells: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.cells = np.asarray(self.cells, dtype=float)
        if not self.dx > 0:
            raise DomainError(f'grid spacing must be positive, got {self.dx}')
        if self.cells.ndim != 2 or self.cells.shape[1] != 3:
            raise DomainError(f'cells must have shape (n, 3), got {self.cells.shape}')
        if len(self.cells) < Solver.MIN_CELLS:
            raise DomainError(
                f'need at least {Solver.MIN_CELLS} cells, got {len(self.cells)}'
            )

    @property
    def n(self) -> int:
        return len(self.cells)

    @property
    def centers(self) -> np.ndarray:
        return self.x0 + (np.arange(self.n) + 0.5) * self.dx

    @property
    def length(self) -> float:
        return self.n * self.dx

    def states(self) -> List[RiemannState]:
        return [RiemannState(*row) for row in self.cells]

    def copy(self) -> 'GridField':
        return GridField(self.x0, self.dx, self.cells.copy(), self.time)
