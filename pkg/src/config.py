from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict

PROJECT_ROOT = Path(__file__).absolute().parents[1]


class Config:
    VERSION = '1.0.0'
    SEED = 0
    THREADS = 4
    SCENARIO_DIR = PROJECT_ROOT / 'data' / 'scenarios'
    OUTPUT_DIR = PROJECT_ROOT / 'data' / 'output'


class Newton:
    TOL = 1e-12
    MAX_ITER = 50
    DEGENERACY_TOL = 1e-10
    BACKTRACK_STEPS = 30


class FiniteDifference:
    STEP = 1e-5
    SECOND_STEP = 1e-4
    REFINEMENT = (4e-3, 2e-3, 1e-3)
    CHAIN = (4e-2, 2e-2, 1e-2)


class Flow:
    EPSILONS = (1e-2, 3e-3, 1e-3, 3e-4)
    ORDER_WINDOW = (1.8, 2.2)
    NOISE_FLOOR = 1e-11
    STEP = 1e-5


class Solver:
    CFL = 0.9
    MIN_CELLS = 4
    CONVERGENCE_CELLS = (64, 128, 256)
    ORDER_WINDOW = (0.8, 1.2)


class Tolerance:
    ANALYTIC_RESIDUAL = 1e-8
    FD_RESIDUAL = 1e-5
    EQUIVALENCE = 1e-8
    GROUP_LAW = 1e-10
    GENSYM = 1e-10
    COMMUTATOR = 1e-8
    PAIRING = 1e-10
    NOISE_FLOOR = 1e-9
    TRICHOTOMY = 1e-8
    MIN_ORDER = 1.0


class Algebra:
    JACOBI_TRIPLES = 1000
    REPLAYS = 200
    AUTOMORPHISMS = 100


class Output:
    FLOAT_FORMAT = '%.17g'
    CSV_COLUMNS = ('t', 'x', 'u', 'v', 'w', 'r1', 'r2', 'r3')


OVERRIDABLE = {
    'Tolerance': Tolerance,
    'Flow': Flow,
    'Solver': Solver,
}


@contextmanager
def config_overrides(overrides: Dict[str, Dict[str, Any]]):
    """Temporarily replace class attributes, e.g. {'Tolerance': {'GENSYM': 1e-9}}."""
    saved = []
    try:
        for section, values in (overrides or {}).items():
            cls = OVERRIDABLE[section]
            for key, value in values.items():
                saved.append((cls, key, getattr(cls, key)))
                setattr(cls, key, value)
        yield
    finally:
        for cls, key, value in reversed(saved):
            setattr(cls, key, value)
