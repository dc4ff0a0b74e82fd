import numpy as np
import pytest

from kwplan.common.errors import DomainError
from kwplan.models.hypotheses import Hypotheses, LagrangeConfig, LatticeState
from kwplan.models.plan import Action, Plan, ACCEPT, CONTINUE


def test_hypotheses_must_be_ordered():
    with pytest.raises(DomainError):
        Hypotheses(0.15, 0.05)
    with pytest.raises(DomainError):
        Hypotheses(0.2, 0.2)


def test_hypotheses_symmetry():
    assert Hypotheses(0.45, 0.55).is_symmetric
    assert Hypotheses(0.3, 0.7).is_symmetric
    assert not Hypotheses(0.05, 0.15).is_symmetric


@pytest.mark.parametrize('n,s', [(0, 0), (3, 4), (2, -1)])
def test_lattice_state_bounds(n, s):
    with pytest.raises(DomainError):
        LatticeState(n, s)


def test_lagrange_config_checks():
    hyp = Hypotheses(0.05, 0.15)
    with pytest.raises(DomainError):
        LagrangeConfig(hyp, 0.15, 10.0, 10.0)
    with pytest.raises(DomainError):
        LagrangeConfig(hyp, 0.1, -1.0, 10.0)
    config = LagrangeConfig(hyp, 0.1, 10.0, 20.0)
    assert config.with_theta_star(0.08).theta_star == 0.08
    assert config.with_theta_star(0.08).lambda1 == 20.0


def test_action_codes_and_swap():
    assert [a.code for a in Action] == ['C', 'A', 'R']
    assert Action.ACCEPT.swapped() is Action.REJECT
    assert Action.CONTINUE.swapped() is Action.CONTINUE


@pytest.fixture
def config():
    return LagrangeConfig(Hypotheses(0.3, 0.7), 0.5, 10.0, 10.0)


def test_plan_from_rows(config):
    plan = Plan.from_rows(config, ['CC', 'ACR', 'AAAR'])
    assert plan.horizon == 3
    assert plan.rows_as_strings() == ['CC', 'ACR', 'AAAR']
    assert plan.action(LatticeState(2, 1)) is Action.CONTINUE
    np.testing.assert_array_equal(plan.row(3), [ACCEPT] * 3 + [2])
    assert not plan.actions.flags.writeable


def test_plan_reachability(config):
    plan = Plan.from_rows(config, ['AC', 'ARC', 'AAAA', 'AAAAR'])
    # (2, 2) continues, so (3, 2) and (3, 3) are reachable, nothing beyond
    np.testing.assert_array_equal(plan.reachable_row(2), [False, True, True])
    np.testing.assert_array_equal(plan.reachable_row(3),
                                  [False, False, True, True])
    assert plan.effective_horizon == 3


def test_plan_stopping_at_stage_one(config):
    plan = Plan.from_rows(config, ['AR', 'CCC', 'AAAR'])
    assert plan.effective_horizon == 1


@pytest.mark.parametrize('rows', [
    ['AC'],
    ['CC', 'AXR'],
    ['CC', 'AR'],
    []
])
def test_plan_rejects_malformed_rows(config, rows):
    with pytest.raises(DomainError):
        Plan.from_rows(config, rows)


def test_padded_table(config):
    plan = Plan.from_rows(config, ['CC', 'ARR'])
    table = plan.padded_table()
    assert table.shape == (3, 3)
    assert table[1, 0] == CONTINUE
    assert table[2, 2] == 2
