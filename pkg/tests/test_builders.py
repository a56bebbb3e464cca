import json

import pytest

from src.builders.scenario_builder import ScenarioBuilder
from src.config import Config, Solver, Tolerance, config_overrides
from src.solutions.hodograph import RegularSolution, UltraSingularSolution
from src.solutions.reductions import Reduction3
from src.util.errors import ScenarioError

SCENARIOS = sorted(p.stem for p in Config.SCENARIO_DIR.glob('*.json'))

GRID = {'t': [0.5, 1.0], 'x': [-0.5, 0.5], 'nt': 4, 'nx': 4}
QUAD = {'family': 'regular', 'phi': [{'mode': 'quad'}]}


def scenario(**changes):
    data = {'name': 'test', 'solution': dict(QUAD), 'grid': dict(GRID)}
    data.update(changes)
    return data


def error_key(builder, data):
    with pytest.raises(ScenarioError) as info:
        builder.build(data)
    return info.value.key


@pytest.mark.parametrize('name', SCENARIOS)
def test_bundled_scenarios_load(builder, name):
    sc = builder.load(name)
    assert sc.name == name
    assert sc.grid.nt > 0 and sc.grid.nx > 0


def test_quad_regular_scenario(builder):
    sc = builder.load('quad-regular')
    assert isinstance(sc.solution, RegularSolution)
    assert sc.solver['config'].boundary == 'exact'
    assert sc.solver['config'].exact is sc.solution
    assert sc.solver['convergence_cells'] == Solver.CONVERGENCE_CELLS


def test_reduction_scenario(builder):
    sc = builder.load('reduction-3')
    assert isinstance(sc.solution, Reduction3)
    assert sc.seed == 7
    assert sc.verify['omega_chain']['iota'] == [0, 1]


def test_ultra_scenario_monotone_map(builder):
    sc = builder.load('ultra')
    assert isinstance(sc.solution, UltraSingularSolution)
    s = sc.solution.evaluate(0.0, 0.5)
    assert (s.u, s.v) == (0.3, -0.2)


def test_load_from_path(builder, tmp_path):
    path = tmp_path / 'mine.json'
    path.write_text(json.dumps(scenario(seed=11)), encoding='utf-8')
    sc = builder.load(str(path))
    assert sc.name == 'test'
    assert sc.seed == 11
    assert sc.solver == {}


def test_hash_is_stable_and_order_independent(builder):
    a = builder.build(scenario(seed=1))
    b = builder.build(dict(reversed(list(scenario(seed=1).items()))))
    assert a.hash == b.hash
    assert len(a.hash) == 64
    assert builder.build(scenario(seed=2)).hash != a.hash


def test_missing_sections(builder):
    assert error_key(builder, {'grid': GRID}) == 'solution'
    assert error_key(builder, {'solution': QUAD}) == 'grid'
    assert error_key(builder, scenario(grid={'t': [0, 1]})) == 'grid.x'
    assert error_key(builder, []) == '<root>'


@pytest.mark.parametrize('solution, key', [
    ({'family': 'nope'}, 'solution.family'),
    ({'phi': []}, 'solution.family'),
    ({'family': 'regular'}, 'solution.phi'),
    ({'family': 'regular', 'phi': []}, 'solution.phi'),
    ({'family': 'regular', 'phi': [{'mode': 'cosh'}]}, 'solution.phi[0].mode'),
    ({'family': 'regular', 'phi': [{'mode': 'exp'}]}, 'solution.phi[0].lambda'),
    ({'family': 'singular'}, 'solution.eps'),
    ({'family': 'ultra', 'W': {'kind': 'sin'}}, 'solution.W.kind'),
    ({'family': 'ultra', 'W': {'kind': 'affine'}}, 'solution.W.alpha'),
    ({'family': 'singular', 'eps': 1, 'theta': {'kind': 'exp'}},
     'solution.theta.alpha'),
    ({'family': 'reduction'}, 'solution.tag'),
])
def test_solution_errors_name_the_key(builder, solution, key):
    assert error_key(builder, scenario(solution=solution)) == key


def test_domain_errors_become_scenario_errors(builder):
    bad_w = {'family': 'ultra', 'W': {'kind': 'affine', 'alpha': 0.0}}
    assert error_key(builder, scenario(solution=bad_w)) == 'solution'
    bad_tag = {'family': 'reduction', 'tag': '9Z'}
    assert error_key(builder, scenario(solution=bad_tag)) == 'solution'


def test_solver_errors(builder):
    solver = {'t_start': 0.5, 't_end': 0.6, 'x': [-0.5, 0.5]}
    assert builder.build(scenario(solver=solver)).solver['cells'] == 128
    assert error_key(builder, scenario(solver=dict(solver, cfl=2.0))) == 'solver'
    missing = {'t_start': 0.5, 'x': [-0.5, 0.5]}
    assert error_key(builder, scenario(solver=missing)) == 'solver.t_end'


def test_override_errors(builder):
    assert error_key(builder, scenario(overrides={'Bogus': {}})) == 'overrides.Bogus'
    bad = {'Tolerance': {'NOPE': 1.0}}
    assert error_key(builder, scenario(overrides=bad)) == 'overrides.Tolerance.NOPE'
    ok = {'Tolerance': {'GENSYM': 1e-9}}
    assert builder.build(scenario(overrides=ok)).overrides == ok


def test_resolve_missing_scenario(builder):
    with pytest.raises(ScenarioError) as info:
        builder.resolve('no-such-scenario')
    assert info.value.key == '--scenario'


def test_malformed_json(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"name": ', encoding='utf-8')
    with pytest.raises(ScenarioError) as info:
        ScenarioBuilder(scenario_dir=tmp_path).load('broken')
    assert info.value.key == '<root>'


def test_config_overrides_are_restored():
    before = Tolerance.GENSYM
    with config_overrides({'Tolerance': {'GENSYM': 1e-3},
                           'Solver': {'CFL': 0.5}}):
        assert Tolerance.GENSYM == 1e-3
        assert Solver.CFL == 0.5
    assert Tolerance.GENSYM == before
    assert Solver.CFL == 0.9
