"""
Optimal truncated plans for a fixed (theta_star, lambda0, lambda1).

The Lagrangian N(theta_star) + lambda0 * alpha + lambda1 * beta is minimized
over all plans truncated at a horizon H by backward induction on the (n, s)
lattice.
"""
import logging
import math

import numpy as np

from kwplan.common.bernoulli import (
    log_binomial_row,
    stage_masses_many
)
from kwplan.common.errors import (
    DomainError,
    SingularSystemError,
    BOUND_NEEDS_MULTIPLIERS,
    HORIZON_INVALID,
    SINGULAR_SYSTEM
)
from kwplan.models.plan import (
    Plan,
    ValueTable,
    row_offset,
    CONTINUE,
    ACCEPT,
    REJECT
)


log = logging.getLogger(__name__)


def separation_weight(hyp):
    """
    w0 = 1 / (1 - P0(f0(X) < f1(X)) - P1(f0(X) >= f1(X))).

    For Bernoulli observations with theta0 < theta1 this is
    1 / (theta1 - theta0).
    """
    p0_below = 0.0
    p1_above = 0.0
    for x, p0, p1 in ((0, 1.0 - hyp.theta0, 1.0 - hyp.theta1),
                      (1, hyp.theta0, hyp.theta1)):
        if p0 < p1:
            p0_below += p0
        else:
            p1_above += p1
    return 1.0 / (1.0 - p0_below - p1_above)


def bound_coefficients(config):
    """
    Solve a * ln(f*(x) / f0(x)) + b * ln(f*(x) / f1(x)) = 1 for x = 0, 1.
    """
    t0, t1, ts = config.hyp.theta0, config.hyp.theta1, config.theta_star
    system = np.array([
        [math.log(ts / t0), math.log(ts / t1)],
        [math.log((1.0 - ts) / (1.0 - t0)), math.log((1.0 - ts) / (1.0 - t1))]
    ])
    det = np.linalg.det(system)
    if not np.isfinite(det) or abs(det) < 1e-300:
        raise SingularSystemError(SINGULAR_SYSTEM.format(ts))
    a, b = np.linalg.solve(system, np.ones(2))
    return float(a), float(b)


def horizon_bound(config):
    """
    Upper bound on the horizon beyond which the optimal plan never
    continues: the smallest n >= 1 with
    a ln(lambda0) + b ln(lambda1) - n <= (a + b) ln(w0).
    """
    if not (config.lambda0 > 1.0 and config.lambda1 > 1.0):
        raise DomainError(
            BOUND_NEEDS_MULTIPLIERS.format(config.lambda0, config.lambda1)
        )
    a, b = bound_coefficients(config)
    w0 = separation_weight(config.hyp)
    excess = (a * math.log(config.lambda0) + b * math.log(config.lambda1) -
              (a + b) * math.log(w0))
    return max(1, int(math.ceil(excess)))


def _backward_pass(config, horizon):
    """
    Yield (n, values, actions) for n = horizon..1 using the scaled
    recursion. Ties prefer stopping, and among stops prefer acceptance.
    """
    if int(horizon) != horizon or horizon < 1:
        raise DomainError(HORIZON_INVALID.format(horizon))
    hyp = config.hyp
    thetas = (hyp.theta0, hyp.theta1, config.theta_star)
    lam0, lam1 = config.lambda0, config.lambda1

    g = stage_masses_many(thetas, horizon, log_binomial_row(horizon))
    stop0 = lam0 * g[0]
    stop1 = lam1 * g[1]
    values = np.minimum(stop0, stop1)
    yield horizon, values, np.where(stop0 >= stop1, ACCEPT, REJECT)

    for n in range(horizon - 1, 0, -1):
        s = np.arange(n + 1)
        g = stage_masses_many(thetas, n, log_binomial_row(n))
        cont = (g[2] +
                values[1:] * ((s + 1) / (n + 1.0)) +
                values[:-1] * ((n + 1 - s) / (n + 1.0)))
        stop0 = lam0 * g[0]
        stop1 = lam1 * g[1]
        values = np.minimum(np.minimum(stop0, stop1), cont)
        actions = np.where(
            stop1 == values, ACCEPT,
            np.where(stop0 == values, REJECT, CONTINUE)
        )
        yield n, values, actions


def build_plan(config, horizon):
    """
    Optimal plan among those truncated at ``horizon``.

    :param config: LagrangeConfig
    :param horizon: Positive integer H
    :return: Plan whose lagrangian_value is 1 + U_1(0) + U_1(1)
    """
    table = np.empty(row_offset(horizon + 1), dtype=np.uint8)
    values = None
    for n, values, actions in _backward_pass(config, horizon):
        start = row_offset(n)
        table[start:start + n + 1] = actions
    lagrangian = 1.0 + float(values[0] + values[1])
    plan = Plan(config, horizon, table, lagrangian)
    log.debug('Built plan H={} theta*={} L={}'.format(
        horizon, config.theta_star, lagrangian))
    return plan


def value_table(config, horizon):
    """Scaled values C(n, s) * U_n(s) of the backward recursion."""
    stages = [None] * horizon
    for n, values, _ in _backward_pass(config, horizon):
        stages[n - 1] = values
    return ValueTable(stages, scaled=True)


def build_plan_unscaled(config, horizon):
    """
    The same plan from the direct recursion on g-values,
    U_n(s) = min(lambda0 g0, lambda1 g1, g* + U_{n+1}(s+1) + U_{n+1}(s)).

    Only usable while theta**n does not underflow; meant for small horizons.

    :return: Tuple (Plan, ValueTable) with unscaled values
    """
    if int(horizon) != horizon or horizon < 1:
        raise DomainError(HORIZON_INVALID.format(horizon))
    hyp = config.hyp
    lam0, lam1 = config.lambda0, config.lambda1
    table = np.empty(row_offset(horizon + 1), dtype=np.uint8)
    stages = [None] * horizon

    def g(theta, n):
        s = np.arange(n + 1)
        return np.power(theta, s) * np.power(1.0 - theta, n - s)

    stop0 = lam0 * g(hyp.theta0, horizon)
    stop1 = lam1 * g(hyp.theta1, horizon)
    values = np.minimum(stop0, stop1)
    start = row_offset(horizon)
    table[start:] = np.where(stop0 >= stop1, ACCEPT, REJECT)
    stages[horizon - 1] = values

    for n in range(horizon - 1, 0, -1):
        cont = g(config.theta_star, n) + values[1:] + values[:-1]
        stop0 = lam0 * g(hyp.theta0, n)
        stop1 = lam1 * g(hyp.theta1, n)
        values = np.minimum(np.minimum(stop0, stop1), cont)
        start = row_offset(n)
        table[start:start + n + 1] = np.where(
            stop1 == values, ACCEPT,
            np.where(stop0 == values, REJECT, CONTINUE)
        )
        stages[n - 1] = values

    lagrangian = 1.0 + float(values[0] + values[1])
    plan = Plan(config, horizon, table, lagrangian)
    return plan, ValueTable(stages, scaled=False)


def effective_horizon(plan):
    return plan.effective_horizon
