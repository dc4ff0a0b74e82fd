import math

import numpy as np
import pytest

from kwplan.common.errors import DomainError, NonConvergenceError
from kwplan.engine import backward, evaluate, solve
from kwplan.models.hypotheses import Hypotheses, LagrangeConfig
from kwplan.models.report import (
    SolveTarget,
    SolveReport,
    OPTION1,
    OPTION2,
    SOLVED,
    MODIFIED_ONLY,
    NEAREST
)

from tests.reference import cells


def _same_reachable_actions(first, second):
    assert first.effective_horizon == second.effective_horizon
    for n in range(1, first.effective_horizon + 1):
        reach = first.reachable_row(n)
        np.testing.assert_array_equal(first.row(n)[reach],
                                      second.row(n)[reach])


def test_solve_target_validation(narrow_hyp):
    with pytest.raises(DomainError):
        SolveTarget(narrow_hyp, 1.5, 0.1)
    with pytest.raises(DomainError):
        SolveTarget(narrow_hyp, 0.1, 0.1, rel_tol=0.0)


def test_symmetric_theta_star_is_one_half():
    found = solve.optimize_theta_star(Hypotheses(0.45, 0.55), 526.61,
                                      526.61)
    assert found.theta_star == 0.5
    assert abs(found.delta) <= 1e-12


def test_narrow_theta_star(narrow_hyp):
    found = solve.optimize_theta_star(narrow_hyp, 157.70, 193.35)
    assert found.theta_star == pytest.approx(0.0768, abs=5e-4)
    assert found.delta <= 1e-4
    assert found.plan.effective_horizon == 128


def test_warm_start_finds_the_same_theta_star(narrow_hyp):
    cold = solve.optimize_theta_star(narrow_hyp, 157.70, 193.35)
    warm = solve.optimize_theta_star(narrow_hyp, 157.70, 193.35,
                                     around=0.13)
    assert warm.theta_star == pytest.approx(cold.theta_star, abs=5e-4)
    assert warm.delta <= 1e-4


def test_truncated_at_horizon_one(narrow_hyp):
    found = solve.optimize_theta_star_truncated(narrow_hyp, 157.70, 193.35,
                                                1)
    assert found.plan.horizon == 1
    assert found.plan.effective_horizon == 1
    assert found.delta == pytest.approx(0.0, abs=1e-12)
    stop = (min(157.70 * 0.95, 193.35 * 0.85) +
            min(157.70 * 0.05, 193.35 * 0.15))
    assert found.lagrangian_value == pytest.approx(1.0 + stop)


def test_truncated_rejects_bad_horizon(narrow_hyp):
    with pytest.raises(DomainError):
        solve.optimize_theta_star_truncated(narrow_hyp, 157.70, 193.35, 0)


def test_doubling_agrees_with_the_bound(wide_hyp):
    bound = solve.optimize_theta_star(wide_hyp, 300.0, 300.0)
    doubled = solve.optimize_theta_star_doubling(wide_hyp, 300.0, 300.0)
    assert doubled.theta_star == bound.theta_star == 0.5
    _same_reachable_actions(bound.plan, doubled.plan)
    assert doubled.lagrangian_value == pytest.approx(
        bound.plan.lagrangian_value, rel=1e-9
    )


def test_alpha_does_not_grow_with_lambda0(narrow_hyp):
    def errors(lam0, lam1):
        config = LagrangeConfig(narrow_hyp, 0.0768, lam0, lam1)
        plan = backward.build_plan(config, backward.horizon_bound(config))
        oc0, oc1 = evaluate.oc_many(plan, [0.05, 0.15])
        return 1.0 - oc0, oc1

    alpha, beta = errors(157.70, 193.35)
    assert errors(1.5 * 157.70, 193.35)[0] <= alpha
    assert errors(157.70, 1.5 * 193.35)[1] <= beta


def _solve_or_best(target, **kwargs):
    try:
        return solve.solve_kw(target, **kwargs)
    except NonConvergenceError as e:
        return e.best


def test_solve_kw_report_is_consistent(wide_hyp):
    target = SolveTarget(wide_hyp, 0.05, 0.05, rel_tol=0.05)
    report = _solve_or_best(target)
    assert isinstance(report, SolveReport)
    assert report.status in (SOLVED, MODIFIED_ONLY, NEAREST)
    assert report.method == OPTION1
    assert report.lambda0 == report.lambda1
    assert report.theta_star == 0.5
    plan = report.plan
    assert report.alpha_achieved == pytest.approx(
        1.0 - evaluate.oc(plan, 0.3), rel=1e-12)
    assert report.beta_achieved == pytest.approx(evaluate.oc(plan, 0.7),
                                                 rel=1e-12)
    assert report.effective_horizon == plan.effective_horizon
    assert report.asn_at_star == pytest.approx(evaluate.asn(plan, 0.5))
    assert report.horizon_bound >= report.effective_horizon
    assert report.efficiency.r == pytest.approx(
        report.fss / report.asn_at_star)
    if report.status != NEAREST:
        assert report.alpha_achieved == pytest.approx(0.05, rel=0.05)


def test_solve_kw_is_deterministic(wide_hyp):
    target = SolveTarget(wide_hyp, 0.05, 0.1, rel_tol=0.05)
    first = _solve_or_best(target)
    second = _solve_or_best(target)
    for name in ('theta_star', 'lambda0', 'lambda1', 'alpha_achieved',
                 'beta_achieved', 'delta', 'asn_at_star', 'q99',
                 'iterations', 'status'):
        assert getattr(first, name) == getattr(second, name)
    np.testing.assert_array_equal(first.plan.actions, second.plan.actions)


def test_solve_kw_option2(wide_hyp):
    target = SolveTarget(wide_hyp, 0.05, 0.05, rel_tol=0.05)
    one = _solve_or_best(target, method=OPTION1)
    two = _solve_or_best(target, method=OPTION2)
    assert two.method == OPTION2
    _same_reachable_actions(one.plan, two.plan)


def test_solve_kw_update_cap(narrow_hyp):
    target = SolveTarget(narrow_hyp, 0.1, 0.1, rel_tol=1e-9)
    with pytest.raises(NonConvergenceError) as error:
        solve.solve_kw(target, max_updates=1)
    best = error.value.best
    assert isinstance(best, SolveReport)
    assert best.status == NEAREST
    assert best.iterations == 1


def test_solve_kw_unknown_method(wide_hyp):
    with pytest.raises(DomainError):
        solve.solve_kw(SolveTarget(wide_hyp, 0.1, 0.1), method='option3')


def test_grid_axis_endpoints():
    assert solve.grid_axis((6.0, 13.0), 2) == [6.0, 13.0]
    assert len(solve.grid_axis((6.0, 13.0), 25)) == 25
    with pytest.raises(DomainError):
        solve.grid_axis((6.0, 13.0), 1)
    with pytest.raises(DomainError):
        solve.grid_axis((13.0, 6.0), 5)


def test_grid_sweep_small(wide_hyp):
    records = solve.grid_sweep(wide_hyp, (6.0, 13.0), 2)
    keys = [(r.log_lambda0, r.log_lambda1) for r in records]
    assert keys == [(6.0, 6.0), (6.0, 13.0), (13.0, 6.0), (13.0, 13.0)]
    for record in records:
        assert record.r == pytest.approx(record.fss_approx / record.n_star)
        assert record.r0 == pytest.approx(record.fss_approx / record.n0)
        assert 0.0 < record.alpha < 1.0
    diagonal = [r for r in records if r.log_lambda0 == r.log_lambda1]
    for record in diagonal:
        assert abs(record.delta) <= 1e-12
        assert record.alpha == pytest.approx(record.beta, abs=1e-10)


def test_grid_sweep_in_parallel_matches(wide_hyp):
    serial = solve.grid_sweep(wide_hyp, (6.0, 9.0), 2, jobs=1)
    parallel = solve.grid_sweep(wide_hyp, (6.0, 9.0), 2, jobs=2)
    assert serial == parallel


@pytest.mark.slow
@pytest.mark.parametrize(
    'theta0,theta1,level,theta_star,big_h,n_star,q99,fss,r,qr',
    cells('theta_star', 'H', 'N', 'Q99', 'FSS', 'R', 'QR')
)
def test_reference_plans(theta0, theta1, level, theta_star, big_h, n_star,
                          q99, fss, r, qr):
    hyp = Hypotheses(theta0, theta1)
    report = solve.solve_kw(SolveTarget(hyp, level, level))
    # where no multipliers reach the tolerance the closest pair is kept
    assert report.status in (SOLVED, NEAREST)
    error_tol = 1e-3 if report.status == SOLVED else 1e-2
    assert report.theta_star == pytest.approx(theta_star, abs=5e-4)
    assert report.asn_at_star == pytest.approx(
        n_star, abs=max(0.05, 5e-4 * n_star))
    assert abs(report.effective_horizon - big_h) <= max(1, 2e-3 * big_h)
    assert abs(report.q99 - q99) <= max(1, 2e-3 * q99)
    assert report.alpha_achieved == pytest.approx(level, rel=error_tol)
    assert report.beta_achieved == pytest.approx(level, rel=error_tol)
    assert abs(report.delta) <= (1e-12 if hyp.is_symmetric else 1e-4)
    assert report.fss == fss
    assert report.efficiency.r == pytest.approx(r, abs=0.01)
    assert report.efficiency.qr == pytest.approx(qr, abs=0.01)
    lagrangian = (report.asn_at_star + report.lambda0 * report.alpha_achieved
                  + report.lambda1 * report.beta_achieved)
    assert report.plan.lagrangian_value == pytest.approx(lagrangian,
                                                         rel=1e-9)


@pytest.mark.slow
@pytest.mark.parametrize('level', [0.1, 0.05, 0.025, 0.01, 0.005, 0.001,
                                   0.0005])
def test_options_agree_on_narrow_pair(narrow_hyp, level):
    target = SolveTarget(narrow_hyp, level, level)
    one = solve.solve_kw(target, method=OPTION1)
    two = solve.solve_kw(target, method=OPTION2)
    _same_reachable_actions(one.plan, two.plan)


@pytest.mark.slow
def test_symmetric_grid_has_zero_delta():
    records = solve.grid_sweep(Hypotheses(0.45, 0.55), jobs=-1)
    assert len(records) == 625
    assert max(abs(r.delta) for r in records) <= 1e-4


@pytest.mark.slow
def test_narrow_grid_efficiency_on_the_diagonal(narrow_hyp):
    records = solve.grid_sweep(narrow_hyp, jobs=-1)
    diagonal = [r for r in records
                if abs(math.log(r.alpha / r.beta)) < 0.2]
    assert diagonal
    for record in diagonal:
        assert 1.2 <= record.r <= 1.6
