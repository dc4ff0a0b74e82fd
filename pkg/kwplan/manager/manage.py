import logging
import sys

import click
from celery import group
from flask import current_app
from marshmallow import ValidationError

from kwplan.common import arg_validators
from kwplan.common.errors import (
    DomainError,
    NonConvergenceError,
    PlanDocumentError
)
from kwplan.common.schemas import (
    dump_plan_document,
    load_plan_document,
    plan_document
)
from kwplan.common.utils import solve_options, write_csv
from kwplan.engine import evaluate, solve
from kwplan.manager import manager
from kwplan.models.hypotheses import Hypotheses
from kwplan.models.report import GridRecord, METHODS, OPTION1, SolveTarget
from kwplan.tracker import tracker
from kwplan.workers import tasks

log = logging.getLogger(__name__)

EXIT_NOT_CONVERGED = 3

SUMMARY_COLUMNS = ('theta_star', 'lambda0', 'lambda1', 'H', 'N_star', 'delta',
                   'Q99', 'alpha', 'beta', 'status')
TABLE_COLUMNS = ('level', 'theta_star', 'lambda0', 'lambda1', 'H', 'N_star',
                 'delta', 'Q99', 'sprt_logA', 'sprt_logB', 'sprt_N',
                 'sprt_Q99', 'FSS', 'R', 'QR', 'R_W', 'QR_W')
GRID_COLUMNS = ('log_lambda0', 'log_lambda1', 'alpha', 'beta', 'N_star',
                'N0', 'N1', 'delta', 'FSS_approx', 'R', 'R0', 'R1')


def _checked(validator, *args):
    """click callback running an arg validator, failing as BadParameter."""
    def callback(ctx, param, value):
        if value is None:
            return value
        try:
            return validator(value, *args)
        except ValidationError as e:
            raise click.BadParameter('; '.join(e.messages), ctx=ctx,
                                     param=param)
    return callback


def _hypotheses(theta0, theta1):
    try:
        return Hypotheses(theta0, theta1)
    except DomainError as e:
        raise click.BadParameter(str(e), param_hint='--theta0/--theta1')


def _hypotheses_options(func):
    func = click.option(
        '--theta1', type=float, required=True,
        callback=_checked(arg_validators.probability_validator, 'theta1'),
        help='Success probability under H1.'
    )(func)
    func = click.option(
        '--theta0', type=float, required=True,
        callback=_checked(arg_validators.probability_validator, 'theta0'),
        help='Success probability under H0.'
    )(func)
    return func


def _solver_options(func):
    func = click.option(
        '--delta-tol', type=float, default=None,
        callback=_checked(arg_validators.positive_validator),
        help='Largest |delta| reported as solved.'
    )(func)
    func = click.option(
        '--rel-tol', type=float, default=None,
        callback=_checked(arg_validators.positive_validator),
        help='Relative tolerance for matching the error probabilities.'
    )(func)
    func = click.option(
        '--method', type=click.Choice(METHODS), default=OPTION1,
        show_default=True, help='Horizon handling.'
    )(func)
    return func


def _summary_row(report):
    return dict(
        theta_star=report.theta_star,
        lambda0=report.lambda0,
        lambda1=report.lambda1,
        H=report.effective_horizon,
        N_star=report.asn_at_star,
        delta=report.delta,
        Q99=report.q99,
        alpha=report.alpha_achieved,
        beta=report.beta_achieved,
        status=report.status
    )


@manager.command('solve')
@_hypotheses_options
@click.option('--alpha', type=float, required=True,
              callback=_checked(arg_validators.probability_validator,
                                'alpha'),
              help='Nominal type I error probability.')
@click.option('--beta', type=float, required=True,
              callback=_checked(arg_validators.probability_validator,
                                'beta'),
              help='Nominal type II error probability.')
@_solver_options
@click.option('--out', type=click.File('w'), default=None,
              help='Write the plan document here.')
def solve_command(theta0, theta1, alpha, beta, method, rel_tol, delta_tol,
                  out):
    """
    Solve the Kiefer-Weiss problem and print a one-row summary.
    """
    config = current_app.config
    target = SolveTarget(
        _hypotheses(theta0, theta1), alpha, beta,
        rel_tol or config['REL_TOL'], delta_tol or config['DELTA_TOL']
    )
    exit_code = 0
    try:
        report = solve.solve_kw(target, method=method,
                                **solve_options(config))
    except NonConvergenceError as e:
        log.error(str(e))
        report = e.best
        exit_code = EXIT_NOT_CONVERGED

    if out is not None:
        document = plan_document(report.plan, report.characteristics,
                                 report.delta, report.status)
        out.write(dump_plan_document(document))
        log.info('Plan written to {}'.format(out.name))
    write_csv(click.get_text_stream('stdout'), SUMMARY_COLUMNS,
              [_summary_row(report)])
    if exit_code:
        sys.exit(exit_code)


@manager.command('eval')
@click.option('--plan', 'plan_file', type=click.File('r'), required=True,
              help='Plan document to evaluate.')
@click.option('--theta', type=str, required=True,
              callback=_checked(arg_validators.probability_list_validator,
                                'theta'),
              help='Comma separated parameter values.')
@click.option('--simulate', type=int, default=None,
              callback=_checked(arg_validators.replications_validator),
              help='Monte Carlo replications per parameter value.')
@click.option('--seed', type=int, default=0, show_default=True,
              callback=_checked(arg_validators.seed_validator),
              help='Seed for the Monte Carlo run.')
@click.option('--jobs', type=int, default=1, show_default=True,
              callback=_checked(arg_validators.jobs_validator),
              help='Parallel processes for the Monte Carlo run.')
def eval_command(plan_file, theta, simulate, seed, jobs):
    """
    Exact OC and ASN of a saved plan, optionally next to Monte Carlo
    estimates.
    """
    try:
        document = load_plan_document(plan_file.read())
    except PlanDocumentError as e:
        raise click.BadParameter(str(e), param_hint='--plan')
    plan = document.plan
    ocs = evaluate.oc_many(plan, theta)
    asns = evaluate.asn_many(plan, theta)
    columns = ['theta', 'OC', 'ASN']
    if simulate:
        columns += ['OC_sim', 'OC_se', 'ASN_sim', 'ASN_se']
    rows = []
    for t, oc, asn in zip(theta, ocs, asns):
        row = dict(theta=t, OC=float(oc), ASN=float(asn))
        if simulate:
            sim = evaluate.simulate(
                plan, t, simulate, seed,
                chunk=current_app.config['SIMULATION_CHUNK'], jobs=jobs
            )
            row.update(OC_sim=sim.oc_hat, OC_se=sim.oc_se,
                       ASN_sim=sim.asn_hat, ASN_se=sim.asn_se)
        rows.append(row)
    write_csv(click.get_text_stream('stdout'), columns, rows)


@manager.command('table')
@_hypotheses_options
@click.option('--levels', type=str, default=None,
              callback=_checked(arg_validators.probability_list_validator,
                                'level'),
              help='Comma separated alpha = beta levels.')
@_solver_options
def table_command(theta0, theta1, levels, method, rel_tol, delta_tol):
    """
    One CSV row per alpha = beta level: the optimal plan, the matched SPRT
    and the fixed-sample-size comparison.
    """
    config = current_app.config
    hyp = _hypotheses(theta0, theta1)
    levels = levels or config['DEFAULT_LEVELS']
    if hyp.is_symmetric:
        log.warning('No SPRT columns for symmetric hypotheses {}: exact '
                    'SPRT matching is generally impossible'.format(hyp))
    rows = []
    exit_code = 0
    for level in levels:
        try:
            rows.append(tasks.solve_level(
                theta0, theta1, level, method,
                rel_tol or config['REL_TOL'],
                delta_tol or config['DELTA_TOL']
            ))
        except NonConvergenceError as e:
            log.error('Level {}: {}'.format(level, e))
            rows.append(dict(_summary_row(e.best), level=level))
            exit_code = EXIT_NOT_CONVERGED
    write_csv(click.get_text_stream('stdout'), TABLE_COLUMNS, rows)
    if exit_code:
        sys.exit(exit_code)


@manager.command('grid')
@_hypotheses_options
@click.option('--points', type=int, default=None,
              callback=_checked(arg_validators.grid_points_validator),
              help='Grid points per axis.')
@click.option('--log-min', type=float, default=None,
              help='Smallest ln(lambda) on both axes.')
@click.option('--log-max', type=float, default=None,
              help='Largest ln(lambda) on both axes.')
@click.option('--jobs', type=int, default=1, show_default=True,
              callback=_checked(arg_validators.jobs_validator),
              help='Parallel processes for the sweep.')
@click.option('--distributed', is_flag=True, default=False,
              help='Dispatch grid points to Celery workers.')
def grid_command(theta0, theta1, points, log_min, log_max, jobs,
                 distributed):
    """
    Sweep an equidistant grid of (ln lambda0, ln lambda1) and print one CSV
    row per point.
    """
    config = current_app.config
    hyp = _hypotheses(theta0, theta1)
    points = points or config['GRID_POINTS']
    log_min = config['GRID_LOG_MIN'] if log_min is None else log_min
    log_max = config['GRID_LOG_MAX'] if log_max is None else log_max
    try:
        arg_validators.grid_range_validator(log_min, log_max)
    except ValidationError as e:
        raise click.BadParameter('; '.join(e.messages),
                                 param_hint='--log-min/--log-max')

    if distributed:
        axis = solve.grid_axis((log_min, log_max), points)
        job = group(tasks.sweep_point.s(theta0, theta1, a, b)
                    for a in axis for b in axis)
        records = sorted(
            (GridRecord(**r) for r in job.apply_async().get()),
            key=lambda r: (r.log_lambda0, r.log_lambda1)
        )
    else:
        records = solve.grid_sweep(hyp, (log_min, log_max), points, jobs,
                                   config['OPTIMIZER_XATOL'])
    write_csv(click.get_text_stream('stdout'), GRID_COLUMNS,
              [_grid_row(r) for r in records])


def _grid_row(record):
    return dict(
        log_lambda0=record.log_lambda0,
        log_lambda1=record.log_lambda1,
        alpha=record.alpha,
        beta=record.beta,
        N_star=record.n_star,
        N0=record.n0,
        N1=record.n1,
        delta=record.delta,
        FSS_approx=record.fss_approx,
        R=record.r,
        R0=record.r0,
        R1=record.r1
    )


def main():
    try:
        manager.main(prog_name='kw_manage')
    except Exception:
        tracker.report_exc_info()
        raise


if __name__ == '__main__':
    main()
