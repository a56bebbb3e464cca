import numpy as np
import pytest

from src.builders.scenario_builder import ScenarioBuilder
from src.solutions.hodograph import RegularSolution
from src.telegraph.modes import QuadMode, TelegraphFn
from src.writers.report_writer import ReportWriter


def quad_state(t, x):
    """Closed form of the regular solution generated by Phi = u^2 + 2v."""
    u = t / 2.0
    v = t * t / 8.0 - x / 2.0 - 1.0
    return np.array([u, v, 2.0 * np.exp(v)])


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def quad():
    return RegularSolution(TelegraphFn.single(QuadMode()), guess=(0.5, -1.0))


@pytest.fixture
def builder():
    return ScenarioBuilder()


@pytest.fixture
def writer(tmp_path):
    return ReportWriter(output_dir=tmp_path)
