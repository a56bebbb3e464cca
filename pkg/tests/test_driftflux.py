import json

import numpy as np
import pytest
import sympy as sp

from src.algebra.lie_algebra import GVector, parse_gvector
from src.driftflux import DriftFlux, main, parse_vector
from src.util.errors import DomainError, ScenarioError


def load_csv(path):
    return np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)


def test_parse_vector_forms():
    expected = parse_gvector('D + 3Pt + 2Px + W(w^2)')
    assert parse_vector('D+3Pt+2Px+W(w^2)') == expected
    assert parse_vector('{"D": 1, "Pt": 3, "Px": 2, "W": "w^2"}') == expected
    assert parse_vector('{"Pv": "1/2"}') == sp.Rational(1, 2) * GVector.basis('Pv')


def test_parse_vector_errors():
    with pytest.raises(ScenarioError) as info:
        parse_vector('{"Q": 1}')
    assert info.value.key == '--canonicalize.Q'
    with pytest.raises(ScenarioError):
        parse_vector('{"D": ')
    with pytest.raises(DomainError):
        parse_vector('D + x')


def test_generate_ultra(tmp_path):
    out = tmp_path / 'ultra.csv'
    assert main(['generate', '--scenario', 'ultra', '--out', str(out),
                 '--threads', '2']) == 0
    data = load_csv(out)
    assert data.shape == (64 * 64, 8)
    np.testing.assert_allclose(data[:, 2], 0.3)
    np.testing.assert_allclose(data[:, 3], -0.2)
    np.testing.assert_allclose(data[:, 4], np.tanh(data[:, 1] - 0.3 * data[:, 0]),
                               atol=1e-15)


def test_simulate_ultra(tmp_path):
    out = tmp_path / 'traj.csv'
    assert main(['simulate', '--scenario', 'ultra', '--out', str(out),
                 '--cells', '32']) == 0
    frames = load_csv(out)
    assert frames.shape[0] % 32 == 0
    np.testing.assert_allclose(frames[:, 2], 0.3, atol=1e-12)
    table = load_csv(tmp_path / 'traj-l1.csv')
    assert table[0, 0] == 0.0
    assert table[-1, 0] == pytest.approx(0.5)
    np.testing.assert_allclose(table[0, 1:], 0.0, atol=1e-12)


def test_verify_ultra_residual(tmp_path):
    report = tmp_path / 'report.json'
    assert main(['verify', '--scenario', 'ultra', '--suite', 'residual',
                 '--report', str(report)]) == 0
    data = json.loads(report.read_text(encoding='utf-8'))
    assert data['scenario'] == 'ultra'
    assert data['suite'] == 'residual'
    assert data['passed']
    assert {c['name'] for c in data['checks']} >= {
        'residual/ultra/analytic', 'trichotomy/ultra'}


def test_algebra_report(tmp_path):
    out = tmp_path / 'algebra.json'
    rc = main(['algebra', '--canonicalize', 'D+3Pt+2Px',
               '--canonicalize', '{"Pv": 1, "W": "w^2"}',
               '--samples', '5', '--out', str(out)])
    data = json.loads(out.read_text(encoding='utf-8'))
    assert rc == (0 if data['passed'] else 1)
    first, second = data['canonicalize']
    assert first['family'] == 1
    assert first['replay']
    assert second['family'] == 5
    assert data['checks']['center']
    assert data['checks']['radical']
    assert len(data['two_dim']) == 17


@pytest.mark.parametrize('args, flag', [
    (['generate', '--scenario', 'ultra'], '--out'),
    (['verify', '--scenario', 'ultra', '--suite', 'residual'], '--report'),
    (['algebra', '--canonicalize', 'G+4Pt+Pv', '--samples', '3'], '--out'),
], ids=['generate', 'verify', 'algebra'])
def test_outputs_are_byte_identical_across_runs(args, flag, tmp_path):
    first, second = tmp_path / 'first', tmp_path / 'second'
    main(args + [flag, str(first), '--threads', '1'])
    main(args + [flag, str(second), '--threads', '4'])
    assert first.read_bytes() == second.read_bytes()


def test_scenario_errors_exit_with_two(tmp_path):
    assert DriftFlux(command='generate', output_dir=tmp_path).run() == 2
    assert DriftFlux(command='generate', scenario='no-such-scenario',
                     output_dir=tmp_path).run() == 2
    bad = tmp_path / 'bad.json'
    bad.write_text('{"solution": {"family": "nope"}, "grid": {}}',
                   encoding='utf-8')
    assert DriftFlux(command='verify', scenario=str(bad),
                     output_dir=tmp_path).run() == 2


def test_simulate_needs_solver_section(tmp_path):
    path = tmp_path / 'nosolver.json'
    path.write_text(json.dumps({
        'solution': {'family': 'ultra'},
        'grid': {'t': [0, 1], 'x': [0, 1], 'nt': 2, 'nx': 2},
    }), encoding='utf-8')
    assert DriftFlux(command='simulate', scenario=str(path),
                     output_dir=tmp_path).run() == 2


def test_bad_usage_exits_with_two():
    with pytest.raises(SystemExit) as info:
        main(['bogus'])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(['verify', '--suite', 'everything'])
