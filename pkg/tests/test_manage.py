import csv
import io
import json
import re

import pytest

from kwplan.common.schemas import dump_plan_document, plan_document
from kwplan.engine import evaluate
from kwplan.manager.manage import manager, TABLE_COLUMNS, GRID_COLUMNS
from kwplan.models.hypotheses import Hypotheses, LagrangeConfig
from kwplan.models.plan import Plan


LOG_LINE = re.compile(r'^\d{4}-\d\d-\d\d \d\d:')


def _csv_lines(output):
    return [line for line in output.splitlines()
            if line and not LOG_LINE.match(line)]


def _rows(output):
    return list(csv.DictReader(io.StringIO('\n'.join(_csv_lines(output)))))


@pytest.fixture
def stage_one_plan_file(tmp_path):
    config = LagrangeConfig(Hypotheses(0.3, 0.7), 0.5, 10.0, 10.0)
    plan = Plan.from_rows(config, ['AR'], 1.0)
    chars = evaluate.characteristics(plan)
    path = tmp_path / 'stage_one.json'
    path.write_text(dump_plan_document(plan_document(plan, chars, 0.0)))
    return str(path)


def test_solve_writes_the_plan(runner, tmp_path):
    out = tmp_path / 'plan.json'
    result = runner.invoke(manager, [
        'solve', '--theta0', '0.3', '--theta1', '0.7', '--alpha', '0.05',
        '--beta', '0.05', '--rel-tol', '0.05', '--out', str(out)
    ])
    assert result.exit_code in (0, 3), result.output
    row = _rows(result.output)[0]
    assert row['theta_star'] == '0.5'
    assert row['lambda0'] == row['lambda1']
    data = json.loads(out.read_text())
    assert data['schema_version'] == 'kw-plan/1'
    assert data['status'] == row['status']
    assert int(row['H']) == data['effective_horizon']


def test_solve_rejects_bad_alpha(runner):
    result = runner.invoke(manager, [
        'solve', '--theta0', '0.05', '--theta1', '0.15', '--alpha', '1.5',
        '--beta', '0.1'
    ])
    assert result.exit_code == 2
    assert '--alpha' in result.output


def test_solve_rejects_unordered_hypotheses(runner):
    result = runner.invoke(manager, [
        'solve', '--theta0', '0.15', '--theta1', '0.05', '--alpha', '0.1',
        '--beta', '0.1'
    ])
    assert result.exit_code == 2


def test_solve_exits_3_when_not_converged(runner, tmp_path, monkeypatch):
    out = tmp_path / 'best.json'
    result = runner.invoke(manager, [
        'solve', '--theta0', '0.3', '--theta1', '0.7', '--alpha', '0.05',
        '--beta', '0.1', '--rel-tol', '1e-12', '--out', str(out)
    ], env={'KWPLAN_CONFIG': str(_cap_config(tmp_path))})
    assert result.exit_code == 3
    assert json.loads(out.read_text())['status'] == 'nearest'


def _cap_config(tmp_path):
    path = tmp_path / 'cap.cfg'
    path.write_text('MAX_LAMBDA_UPDATES = 1\n')
    return path


def test_eval_stage_one_plan(runner, stage_one_plan_file):
    result = runner.invoke(manager, [
        'eval', '--plan', stage_one_plan_file, '--theta', '0.2,0.5'
    ])
    assert result.exit_code == 0, result.output
    rows = _rows(result.output)
    assert [r['ASN'] for r in rows] == ['1', '1']
    assert rows[0]['OC'] == '0.8'


def test_eval_with_simulation(runner, stage_one_plan_file):
    result = runner.invoke(manager, [
        'eval', '--plan', stage_one_plan_file, '--theta', '0.2',
        '--simulate', '1000', '--seed', '1'
    ])
    assert result.exit_code == 0, result.output
    row = _rows(result.output)[0]
    assert row['ASN_sim'] == '1'
    assert row['ASN_se'] == '0'


def test_eval_rejects_malformed_plan(runner, tmp_path):
    path = tmp_path / 'bad.json'
    path.write_text('{"schema_version": "kw-plan/1"}')
    result = runner.invoke(manager, [
        'eval', '--plan', str(path), '--theta', '0.2'
    ])
    assert result.exit_code == 2
    assert 'hypotheses' in result.output


def test_table_symmetric_has_no_sprt_columns(runner):
    result = runner.invoke(manager, [
        'table', '--theta0', '0.3', '--theta1', '0.7', '--levels', '0.05',
        '--rel-tol', '0.05'
    ])
    assert result.exit_code in (0, 3), result.output
    rows = _rows(result.output)
    assert list(rows[0]) == list(TABLE_COLUMNS)
    for column in ('sprt_logA', 'sprt_logB', 'sprt_N', 'sprt_Q99', 'R_W',
                   'QR_W'):
        assert rows[0][column] == ''


def test_table_rejects_bad_levels(runner):
    result = runner.invoke(manager, [
        'table', '--theta0', '0.3', '--theta1', '0.7', '--levels', '0.1,2'
    ])
    assert result.exit_code == 2


def test_grid_two_points(runner):
    result = runner.invoke(manager, [
        'grid', '--theta0', '0.3', '--theta1', '0.7', '--points', '2'
    ])
    assert result.exit_code == 0, result.output
    rows = _rows(result.output)
    assert list(rows[0]) == list(GRID_COLUMNS)
    assert [(r['log_lambda0'], r['log_lambda1']) for r in rows] == [
        ('6', '6'), ('6', '13'), ('13', '6'), ('13', '13')
    ]


def test_grid_distributed_matches_local(runner):
    args = ['grid', '--theta0', '0.3', '--theta1', '0.7', '--points', '2',
            '--log-min', '6', '--log-max', '8']
    local = runner.invoke(manager, args)
    distributed = runner.invoke(manager, args + ['--distributed'])
    assert distributed.exit_code == 0, distributed.output
    assert _csv_lines(distributed.output) == _csv_lines(local.output)


@pytest.mark.parametrize('args', [
    ['--points', '1'],
    ['--jobs', '0'],
    ['--log-min', '13', '--log-max', '6'],
])
def test_grid_rejects_bad_arguments(runner, args):
    result = runner.invoke(manager, [
        'grid', '--theta0', '0.3', '--theta1', '0.7'
    ] + args)
    assert result.exit_code == 2


@pytest.mark.parametrize('args', [
    ['--seed', '-1'],
    ['--jobs', '0'],
])
def test_eval_rejects_bad_simulation_arguments(runner, stage_one_plan_file,
                                               args):
    result = runner.invoke(manager, [
        'eval', '--plan', stage_one_plan_file, '--theta', '0.2',
        '--simulate', '1000'
    ] + args)
    assert result.exit_code == 2
    assert args[0] in result.output


def test_eval_simulation_ignores_jobs(runner, stage_one_plan_file):
    rows = [
        _rows(runner.invoke(manager, [
            'eval', '--plan', stage_one_plan_file, '--theta', '0.2',
            '--simulate', '1000', '--seed', '4', '--jobs', jobs
        ]).output)
        for jobs in ('1', '2')
    ]
    assert rows[0] == rows[1]
