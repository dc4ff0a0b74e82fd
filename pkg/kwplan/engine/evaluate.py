"""
Exact characteristics of truncated plans.

All recursions run on the scaled (binomial) masses and are driven by the
plan's action table alone, so they apply to any truncated plan, optimal or
not. Only stages up to the effective horizon are visited.
"""
import logging

import numpy as np
from joblib import Parallel, delayed
from scipy.optimize import minimize_scalar

from kwplan import config as defaults
from kwplan.common.bernoulli import log_binomial_row, stage_masses_many
from kwplan.common.errors import (
    DistributionError,
    DomainError,
    check_probability,
    LEVEL_OUT_OF_RANGE,
    MASS_NOT_NORMALIZED,
    REPLICATIONS_INVALID
)
from kwplan.models.characteristics import (
    AsnSup,
    Characteristics,
    SimulationResult
)
from kwplan.models.plan import CONTINUE, ACCEPT


log = logging.getLogger(__name__)

QUANTILE_LEVEL = 0.99


def _thetas(thetas):
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    for theta in thetas:
        check_probability(float(theta))
    return thetas


def _weights(n):
    s = np.arange(n + 1)
    return (n + 1 - s) / (n + 1.0), (s + 1) / (n + 1.0)


def oc_many(plan, thetas):
    """Operating characteristic P(accept H0) at each theta."""
    thetas = _thetas(thetas)
    top = plan.effective_horizon
    row = plan.row(top)
    acc = stage_masses_many(thetas, top) * (row == ACCEPT)
    for n in range(top - 1, 0, -1):
        row = plan.row(n)
        down, up = _weights(n)
        g = stage_masses_many(thetas, n, log_binomial_row(n))
        carried = acc[:, :-1] * down + acc[:, 1:] * up
        acc = np.where(row == CONTINUE, carried, g * (row == ACCEPT))
    return acc[:, 0] + acc[:, 1]


def oc(plan, theta):
    return float(oc_many(plan, [theta])[0])


def asn_many(plan, thetas):
    """Average sample number at each theta, in one backward pass."""
    thetas = _thetas(thetas)
    top = plan.effective_horizon
    remaining = np.zeros((thetas.size, top + 1))
    for n in range(top - 1, 0, -1):
        row = plan.row(n)
        down, up = _weights(n)
        g = stage_masses_many(thetas, n, log_binomial_row(n))
        carried = g + remaining[:, :-1] * down + remaining[:, 1:] * up
        remaining = np.where(row == CONTINUE, carried, 0.0)
    return 1.0 + remaining[:, 0] + remaining[:, 1]


def asn(plan, theta):
    return float(asn_many(plan, [theta])[0])


def stop_distribution(plan, theta):
    """
    P(tau = n) for n = 1..effective horizon, by forward propagation of the
    probability of reaching each state.
    """
    theta = check_probability(float(theta))
    top = plan.effective_horizon
    reach = np.array([1.0 - theta, theta])
    dist = np.zeros(top)
    for n in range(1, top + 1):
        cont = plan.row(n) == CONTINUE
        dist[n - 1] = reach[~cont].sum()
        if n == top:
            break
        moving = np.where(cont, reach, 0.0)
        reach = np.zeros(n + 2)
        reach[:-1] += moving * (1.0 - theta)
        reach[1:] += moving * theta
    return dist


def quantile(stop_dist, level=QUANTILE_LEVEL):
    """Smallest n whose cumulative stopping probability reaches ``level``."""
    if not 0.0 < level < 1.0:
        raise DomainError(LEVEL_OUT_OF_RANGE.format(level))
    stop_dist = np.asarray(stop_dist, dtype=float)
    total = stop_dist.sum()
    if abs(total - 1.0) > 1e-9:
        raise DistributionError(MASS_NOT_NORMALIZED.format(total))
    hits = np.flatnonzero(np.cumsum(stop_dist) >= level)
    return int(hits[0]) + 1 if hits.size else int(stop_dist.size)


def asn_sup(plan, xatol=defaults.OPTIMIZER_XATOL,
            scan_points=defaults.SCAN_POINTS):
    """
    Maximum of the ASN over theta in (theta0, theta1).

    A scan over equispaced points (endpoints included) picks the bracket,
    the bounded Brent optimizer refines inside it. theta_star itself is
    always a candidate, so the result never falls below its ASN.
    ``edge_exceeds`` flags plans whose ASN at theta0 or theta1 is above the
    interior maximum.
    """
    hyp = plan.config.hyp
    grid = np.linspace(hyp.theta0, hyp.theta1, max(scan_points, 3))
    scanned = asn_many(plan, grid)
    k = int(np.argmax(scanned[1:-1])) + 1
    result = minimize_scalar(
        lambda t: -asn(plan, t),
        bounds=(grid[k - 1], grid[k + 1]),
        method='bounded',
        options={'xatol': xatol}
    )
    candidates = [(float(result.x), float(-result.fun)),
                  (float(grid[k]), float(scanned[k]))]
    theta_star = plan.config.theta_star
    candidates.append((theta_star, asn(plan, theta_star)))
    if hyp.is_symmetric:
        candidates.append((0.5, asn(plan, 0.5)))
    theta_max, n_max = max(candidates, key=lambda c: c[1])
    edge_exceeds = bool(max(scanned[0], scanned[-1]) > n_max)
    if edge_exceeds:
        log.warning('ASN at a hypothesized value exceeds the interior '
                    'maximum {} of plan {}'.format(n_max, plan))
    return AsnSup(theta_max, n_max, edge_exceeds)


def delta(plan, xatol=defaults.OPTIMIZER_XATOL):
    """sup ASN minus ASN at theta_star, never negative."""
    return asn_sup(plan, xatol).n_max - asn(plan, plan.config.theta_star)


def characteristics(plan, thetas=()):
    hyp = plan.config.hyp
    theta_star = plan.config.theta_star
    points = sorted({hyp.theta0, hyp.theta1, theta_star} |
                    {float(t) for t in thetas})
    ocs = oc_many(plan, points)
    asns = asn_many(plan, points)
    oc_at = dict(zip(points, ocs.tolist()))
    asn_at = dict(zip(points, asns.tolist()))
    dist = stop_distribution(plan, theta_star)
    return Characteristics(
        oc=oc_at,
        asn=asn_at,
        alpha=1.0 - oc_at[hyp.theta0],
        beta=oc_at[hyp.theta1],
        stop_dist=dist,
        q99=quantile(dist),
        theta_star=theta_star
    )


def _chunks(replications, chunk):
    full, rest = divmod(replications, chunk)
    return [chunk] * full + ([rest] if rest else [])


def _run_chunk(table, top, theta, size, rng):
    s = np.zeros(size, dtype=np.int64)
    active = np.ones(size, dtype=bool)
    stopped_at = np.zeros(size, dtype=np.int64)
    accepted = np.zeros(size, dtype=bool)
    for n in range(1, top + 1):
        idx = np.flatnonzero(active)
        if not idx.size:
            break
        s[idx] += rng.random(idx.size) < theta
        acts = table[n, s[idx]]
        stop = acts != CONTINUE
        if n == top:
            stop[:] = True
        done = idx[stop]
        stopped_at[done] = n
        accepted[done] = acts[stop] == ACCEPT
        active[done] = False
    return accepted, stopped_at


def _simulate_chunk(table, top, theta, size, child):
    rng = np.random.Generator(np.random.PCG64(child))
    accepted, stopped_at = _run_chunk(table, top, theta, size, rng)
    return (int(accepted.sum()), float(stopped_at.sum()),
            float(np.square(stopped_at, dtype=float).sum()))


def simulate(plan, theta, replications, seed,
             chunk=defaults.SIMULATION_CHUNK, jobs=1):
    """
    Monte Carlo run of ``plan`` on Bernoulli(theta) streams.

    Replications are split into chunks of ``chunk``; chunk i draws from the
    i-th child of SeedSequence(seed) through PCG64, so the output depends on
    the seed only, not on ``jobs``, the number of processes the chunks are
    spread over.
    """
    theta = check_probability(float(theta))
    if int(replications) != replications or replications < 1:
        raise DomainError(REPLICATIONS_INVALID.format(replications))
    top = plan.effective_horizon
    table = plan.padded_table(top)
    sizes = _chunks(int(replications), chunk)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    parts = Parallel(n_jobs=jobs)(
        delayed(_simulate_chunk)(table, top, theta, size, child)
        for size, child in zip(sizes, children)
    )
    accepted_total = sum(p[0] for p in parts)
    n_sum = sum(p[1] for p in parts)
    n_sq_sum = sum(p[2] for p in parts)
    return _summarize(theta, int(replications), accepted_total, n_sum,
                      n_sq_sum)


def _summarize(theta, replications, accepted_total, n_sum, n_sq_sum):
    mean = n_sum / replications
    var = max(n_sq_sum / replications - mean * mean, 0.0)
    if replications > 1:
        var *= replications / (replications - 1.0)
    return SimulationResult(
        theta=theta,
        replications=replications,
        oc_hat=accepted_total / replications,
        asn_hat=mean,
        asn_var=var
    )
