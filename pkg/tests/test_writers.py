import json

from src.config import Config
from src.verifiers.results import CheckResult, tolerance_check
from src.writers.report_writer import (
    CONVERGENCE_COLUMNS, build_report, convergence_rows
)


def test_write_csv(writer, tmp_path):
    path = writer.write_csv([[0.1, 1.0 / 3.0, 0, 0, 1, 0, 0, 1]], 'grid.csv')
    assert path == tmp_path / 'grid.csv'
    lines = path.read_text(encoding='utf-8').split('\n')
    assert lines[0] == 't,x,u,v,w,r1,r2,r3'
    values = lines[1].split(',')
    assert values[0] == '%.17g' % 0.1
    assert float(values[1]) == 1.0 / 3.0
    assert lines[2] == ''


def test_write_csv_custom_columns(writer, tmp_path):
    path = writer.write_csv([1, 2, 3, 4], tmp_path / 'sub' / 'pairs.csv',
                            ('a', 'b'))
    lines = path.read_text(encoding='utf-8').splitlines()
    assert lines == ['a,b', '1,2', '3,4']


def test_write_json(writer):
    path = writer.write_json({'name': 'héllo', 'values': [1, 2]}, 'r.json')
    text = path.read_text(encoding='utf-8')
    assert 'héllo' in text
    assert text.endswith('}\n')
    assert json.loads(text) == {'name': 'héllo', 'values': [1, 2]}


def test_build_report():
    checks = [tolerance_check('a', 1e-12, 1e-8),
              CheckResult('b', 0.5, 1.0, False, 'tolerance', {'n': 3})]
    report = build_report('quad-regular', 'abc', 'residual', checks)
    assert report['tool_version'] == Config.VERSION
    assert report['suite'] == 'residual'
    assert [c['name'] for c in report['checks']] == ['a', 'b']
    assert report['checks'][1]['detail'] == {'n': 3}
    assert not report['passed']
    assert build_report('s', 'h', 'all', checks[:1])['passed']
    json.dumps(report)


def test_convergence_rows():
    study = {'table': [
        {'cells': 32, 'dx': 1 / 32, 'l1': [1e-2, 2e-2, 3e-2], 'total': 6e-2},
        {'cells': 64, 'dx': 1 / 64, 'l1': [5e-3, 1e-2, 1.5e-2], 'total': 3e-2},
    ]}
    rows = convergence_rows(study)
    assert len(rows[0]) == len(CONVERGENCE_COLUMNS)
    assert rows[1] == [64, 1 / 64, 5e-3, 1e-2, 1.5e-2, 3e-2]
