import logging

import flask

from kwplan import config as defaults
from kwplan.common.errors import NonConvergenceError
from kwplan.common.utils import solve_options, sprt_options
from kwplan.engine import solve
from kwplan.engine.baselines import (
    efficiency_ratios,
    sprt_characteristics,
    sprt_match
)
from kwplan.models.hypotheses import Hypotheses
from kwplan.models.report import SolveTarget
from kwplan.workers import celery

log = logging.getLogger(__name__)


def _config():
    if flask.has_app_context():
        return flask.current_app.config
    return vars(defaults)


@celery.task
def sweep_point(theta0, theta1, log_lambda0, log_lambda1):
    """One grid point, returned as a plain dict."""
    log.info('Grid point ({}, {}) started'.format(log_lambda0, log_lambda1))
    record = solve.sweep_point(Hypotheses(theta0, theta1), log_lambda0,
                               log_lambda1, _config()['OPTIMIZER_XATOL'])
    log.info('Grid point ({}, {}) done'.format(log_lambda0, log_lambda1))
    return record._asdict()


@celery.task
def solve_level(theta0, theta1, level, method, rel_tol, delta_tol,
                with_sprt=True):
    """
    One table row: the plan solved at alpha = beta = ``level`` and, for
    asymmetric hypotheses, the matched SPRT evaluated at theta_star.
    """
    hyp = Hypotheses(theta0, theta1)
    log.info('Solving {} at level {}'.format(hyp, level))
    report = solve.solve_kw(
        SolveTarget(hyp, level, level, rel_tol, delta_tol), method=method,
        **solve_options(_config())
    )
    row = dict(
        level=level,
        theta_star=report.theta_star,
        lambda0=report.lambda0,
        lambda1=report.lambda1,
        H=report.effective_horizon,
        N_star=report.asn_at_star,
        delta=report.delta,
        Q99=report.q99,
        FSS=report.fss,
        R=report.efficiency.r,
        QR=report.efficiency.qr,
        status=report.status
    )
    if with_sprt and not hyp.is_symmetric:
        try:
            design = sprt_match(hyp, level, level, rel_tol,
                                **sprt_options(_config()))
        except NonConvergenceError as e:
            log.warning(str(e))
            design = e.best
        sprt = sprt_characteristics(
            design, report.theta_star, _config()['SPRT_RESIDUAL_TOL'],
            _config()['SPRT_STAGE_CAP']
        )
        ratios = efficiency_ratios(report.fss, report.characteristics, sprt)
        row.update(
            sprt_logA=design.log_b,
            sprt_logB=design.log_a,
            sprt_N=sprt.asn_at_star,
            sprt_Q99=sprt.q99_at_star,
            R_W=ratios.r_w,
            QR_W=ratios.qr_w
        )
    log.info('Level {} done: {}'.format(level, report.status))
    return row
