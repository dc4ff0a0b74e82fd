"""
Outer optimization: theta_star minimizing delta for given multipliers, and
multipliers matching nominal error probabilities.
"""
import itertools
import logging
import math
from collections import namedtuple

import numpy as np
from joblib import Parallel, delayed
from scipy.optimize import minimize_scalar

from kwplan import config as defaults
from kwplan.common.errors import (
    DomainError,
    NonConvergenceError,
    GRID_POINTS_INVALID,
    GRID_RANGE_INVALID,
    HORIZON_INVALID,
    LAMBDA_NOT_CONVERGED,
    METHOD_UNKNOWN
)
from kwplan.engine import backward, evaluate
from kwplan.engine.baselines import efficiency_ratios, fss_approx, fss_exact
from kwplan.engine.matching import match_pair, MATCHED, CAPPED
from kwplan.models.hypotheses import LagrangeConfig
from kwplan.models.report import (
    GridRecord,
    SolveReport,
    METHODS,
    OPTION1,
    SOLVED,
    MODIFIED_ONLY
)
from kwplan.models.report import NEAREST as NEAREST_STATUS


log = logging.getLogger(__name__)

ThetaStar = namedtuple('ThetaStar', ['theta_star', 'plan', 'delta'])
TruncatedThetaStar = namedtuple(
    'TruncatedThetaStar',
    ['theta_star', 'plan', 'delta', 'lagrangian_value']
)

# Half-width, as a share of theta1 - theta0, of the warm-started bracket.
WARM_BRACKET = 0.1


def _minimize_delta(hyp, lambda0, lambda1, build, xatol, around=None):
    """
    Shared theta_star search. ``build(config)`` returns the plan for one
    candidate. Bounded Brent on delta, plus the fixed-point candidate
    theta_star = argmax ASN of the best plan; the smallest delta wins.
    """
    if hyp.is_symmetric and lambda0 == lambda1:
        plan = build(LagrangeConfig(hyp, 0.5, lambda0, lambda1))
        return 0.5, plan, evaluate.delta(plan, xatol)

    plans = {}
    deltas = {}
    sups = {}

    def objective(theta_star):
        theta_star = float(theta_star)
        if theta_star not in deltas:
            plan = build(LagrangeConfig(hyp, theta_star, lambda0, lambda1))
            sup = evaluate.asn_sup(plan, xatol)
            plans[theta_star] = plan
            sups[theta_star] = sup
            deltas[theta_star] = sup.n_max - evaluate.asn(plan, theta_star)
        return deltas[theta_star]

    width = hyp.theta1 - hyp.theta0
    margin = width * 1e-6
    full = (hyp.theta0 + margin, hyp.theta1 - margin)
    bracket = full
    if around is not None:
        bracket = (max(full[0], around - WARM_BRACKET * width),
                   min(full[1], around + WARM_BRACKET * width))

    def search(bounds):
        result = minimize_scalar(objective, bounds=bounds, method='bounded',
                                 options={'xatol': xatol})
        return float(result.x)

    found = search(bracket)
    edge = 2.0 * xatol
    if bracket != full and (found - bracket[0] < edge or
                            bracket[1] - found < edge):
        log.debug('theta_star {} at the warm bracket edge, widening'.format(
            found))
        found = search(full)

    best = min(deltas, key=deltas.get)
    fixed_point = sups[best].theta_max
    if full[0] < fixed_point < full[1]:
        objective(fixed_point)
        best = min(deltas, key=deltas.get)
    return best, plans[best], deltas[best]


def optimize_theta_star(hyp, lambda0, lambda1,
                        xatol=defaults.OPTIMIZER_XATOL, around=None):
    """
    theta_star minimizing delta, each candidate plan built at the horizon
    bound for its own (theta_star, lambda0, lambda1).

    :param around: Previous theta_star; the search starts in a bracket
                   around it and widens when the minimum hits an edge
    :return: ThetaStar(theta_star, plan, delta)
    """
    def build(config):
        return backward.build_plan(config, backward.horizon_bound(config))

    return ThetaStar(*_minimize_delta(hyp, lambda0, lambda1, build, xatol,
                                      around))


def optimize_theta_star_truncated(hyp, lambda0, lambda1, horizon,
                                  xatol=defaults.OPTIMIZER_XATOL,
                                  around=None):
    """
    The same search at a fixed horizon, no bound needed.

    :return: TruncatedThetaStar(theta_star, plan, delta, lagrangian_value)
    """
    if int(horizon) != horizon or horizon < 1:
        raise DomainError(HORIZON_INVALID.format(horizon))

    def build(config):
        return backward.build_plan(config, horizon)

    theta_star, plan, delta = _minimize_delta(
        hyp, lambda0, lambda1, build, xatol, around
    )
    return TruncatedThetaStar(theta_star, plan, delta, plan.lagrangian_value)


def optimize_theta_star_doubling(hyp, lambda0, lambda1,
                                 xatol=defaults.OPTIMIZER_XATOL, around=None,
                                 first_horizon=defaults.OPTION2_FIRST_HORIZON,
                                 l_rtol=defaults.OPTION2_L_RTOL,
                                 max_horizon=defaults.OPTION2_MAX_HORIZON):
    """
    Truncated search at horizons first_horizon, 2 * first_horizon, ...
    until two successive Lagrangian values agree to ``l_rtol``.
    """
    horizon = first_horizon
    previous = None
    while True:
        current = optimize_theta_star_truncated(
            hyp, lambda0, lambda1, horizon, xatol, around
        )
        if previous is not None:
            change = abs(current.lagrangian_value -
                         previous.lagrangian_value)
            if change <= l_rtol * abs(current.lagrangian_value):
                return current
        if horizon >= max_horizon:
            log.warning('Lagrangian still moving at horizon {}, stopping'
                        .format(horizon))
            return current
        around = current.theta_star
        previous = current
        horizon *= 2
        log.info('Doubling horizon to {} (L={})'.format(
            horizon, current.lagrangian_value))


def _initial_log_lambda(level, clip):
    return min(max(math.log(1.0 / (level * level)), clip[0]), clip[1])


def solve_kw(target, method=OPTION1, xatol=defaults.OPTIMIZER_XATOL,
             max_updates=defaults.MAX_LAMBDA_UPDATES,
             refine=defaults.MATCH_REFINE_UPDATES,
             log_lambda_bounds=defaults.LOG_LAMBDA_BOUNDS,
             initial_clip=defaults.INITIAL_LOG_LAMBDA_CLIP,
             first_horizon=defaults.OPTION2_FIRST_HORIZON,
             l_rtol=defaults.OPTION2_L_RTOL,
             max_horizon=defaults.OPTION2_MAX_HORIZON):
    """
    Multipliers (lambda0, lambda1), theta_star and the plan whose error
    probabilities match ``target`` within its relative tolerance.

    Each multiplier update re-runs the theta_star search. Option 1 builds
    plans at the horizon bound, Option 2 grows the horizon until the
    Lagrangian settles.

    :param target: SolveTarget
    :param method: "option1" or "option2"
    :return: SolveReport
    :raises NonConvergenceError: After ``max_updates`` updates; ``best``
                                 holds the report of the best iterate
    """
    if method not in METHODS:
        raise DomainError(METHOD_UNKNOWN.format(method, ', '.join(METHODS)))
    hyp = target.hyp
    tied = (hyp.is_symmetric and
            target.alpha_nominal == target.beta_nominal)
    start = (_initial_log_lambda(target.alpha_nominal, initial_clip),
             _initial_log_lambda(target.beta_nominal, initial_clip))
    warm = {'theta_star': None}

    def evaluate_point(x0, x1):
        lambda0, lambda1 = math.exp(x0), math.exp(x1)
        if tied:
            lambda1 = lambda0
        if method == OPTION1:
            found = optimize_theta_star(hyp, lambda0, lambda1, xatol,
                                        warm['theta_star'])
        else:
            found = optimize_theta_star_doubling(
                hyp, lambda0, lambda1, xatol, warm['theta_star'],
                first_horizon, l_rtol, max_horizon
            )
        warm['theta_star'] = found.theta_star
        oc0, oc1 = evaluate.oc_many(found.plan, [hyp.theta0, hyp.theta1])
        alpha, beta = 1.0 - float(oc0), float(oc1)
        log.info('lambda0={:.6g} lambda1={:.6g} theta*={:.6f} alpha={:.6g} '
                 'beta={:.6g} delta={:.3g}'.format(
                     lambda0, lambda1, found.theta_star, alpha, beta,
                     found.delta))
        return alpha, beta, (lambda0, lambda1, found)

    result = match_pair(
        evaluate_point, start, (target.alpha_nominal, target.beta_nominal),
        target.rel_tol, log_lambda_bounds, max_updates, max_step=1.0,
        tied=tied, label='lambda match', refine=refine
    )
    lambda0, lambda1, found = result.best.payload
    if result.status == MATCHED:
        status = SOLVED if abs(found.delta) <= target.delta_tol \
            else MODIFIED_ONLY
    else:
        status = NEAREST_STATUS
    report = _report(target, method, lambda0, lambda1, found,
                     result.iterations, status, xatol)

    if result.status == CAPPED:
        raise NonConvergenceError(
            LAMBDA_NOT_CONVERGED.format(target.alpha_nominal,
                                        target.beta_nominal, target.rel_tol,
                                        max_updates),
            best=report
        )
    if status != SOLVED:
        log.warning('Solve for {} ended {} with delta={:.3g}'.format(
            hyp, status, found.delta))
    else:
        log.info('Solved {} in {} updates'.format(hyp, result.iterations))
    return report


def _report(target, method, lambda0, lambda1, found, iterations, status,
            xatol):
    plan = found.plan
    chars = evaluate.characteristics(plan)
    sup = evaluate.asn_sup(plan, xatol)
    fss, _ = fss_exact(target.hyp, target.alpha_nominal, target.beta_nominal)
    if method == OPTION1:
        bound = backward.horizon_bound(plan.config)
    else:
        bound = plan.horizon
    return SolveReport(
        theta_star=found.theta_star,
        lambda0=lambda0,
        lambda1=lambda1,
        plan=plan,
        alpha_achieved=chars.alpha,
        beta_achieved=chars.beta,
        delta=found.delta,
        asn_at_star=chars.asn_at_star,
        effective_horizon=plan.effective_horizon,
        q99=chars.q99,
        iterations=iterations,
        status=status,
        method=method,
        horizon_bound=bound,
        fss=fss,
        efficiency=efficiency_ratios(fss, chars),
        asn_sup_theta=sup.theta_max,
        edge_exceeds=sup.edge_exceeds,
        characteristics=chars
    )


def sweep_point(hyp, log_lambda0, log_lambda1,
                xatol=defaults.OPTIMIZER_XATOL):
    """One grid row: the optimal plan at (ln lambda0, ln lambda1)."""
    found = optimize_theta_star(hyp, math.exp(log_lambda0),
                                math.exp(log_lambda1), xatol)
    thetas = [hyp.theta0, hyp.theta1, found.theta_star]
    oc0, oc1, _ = evaluate.oc_many(found.plan, thetas)
    n0, n1, n_star = (float(v) for v in evaluate.asn_many(found.plan,
                                                         thetas))
    alpha, beta = 1.0 - float(oc0), float(oc1)
    approx = fss_approx(hyp, alpha, beta)
    return GridRecord(
        log_lambda0=float(log_lambda0),
        log_lambda1=float(log_lambda1),
        alpha=alpha,
        beta=beta,
        n_star=n_star,
        n0=n0,
        n1=n1,
        delta=found.delta,
        fss_approx=approx,
        r=approx / n_star,
        r0=approx / n0,
        r1=approx / n1
    )


def grid_axis(log_lambda_range, points_per_axis):
    if int(points_per_axis) != points_per_axis or points_per_axis < 2:
        raise DomainError(GRID_POINTS_INVALID.format(points_per_axis))
    low, high = log_lambda_range
    if not low < high:
        raise DomainError(GRID_RANGE_INVALID.format(low, high))
    return np.linspace(low, high, int(points_per_axis)).tolist()


def grid_sweep(hyp, log_lambda_range=(defaults.GRID_LOG_MIN,
                                      defaults.GRID_LOG_MAX),
               points_per_axis=defaults.GRID_POINTS, jobs=1,
               xatol=defaults.OPTIMIZER_XATOL):
    """
    Equidistant points_per_axis x points_per_axis sweep over
    (ln lambda0, ln lambda1). Points run in ``jobs`` processes; rows come
    back sorted by (ln lambda0, ln lambda1).
    """
    axis = grid_axis(log_lambda_range, points_per_axis)
    points = list(itertools.product(axis, axis))
    log.info('Sweeping {} grid points for {} with {} jobs'.format(
        len(points), hyp, jobs))
    records = Parallel(n_jobs=jobs)(
        delayed(sweep_point)(hyp, a, b, xatol) for a, b in points
    )
    return sorted(records, key=lambda r: (r.log_lambda0, r.log_lambda1))
