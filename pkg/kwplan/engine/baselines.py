"""
Baselines for efficiency comparisons: Wald's SPRT evaluated exactly on the
integer lattice, and the fixed-sample-size (FSS) test.
"""
import logging
import math
from collections import namedtuple

import numpy as np
from scipy.stats import binom, norm

from kwplan import config as defaults
from kwplan.common.bernoulli import log_likelihood_ratio_increment
from kwplan.common.errors import (
    DomainError,
    NonAbsorptionError,
    NonConvergenceError,
    check_probability,
    REPLICATIONS_INVALID,
    SPRT_NOT_ABSORBED,
    SPRT_NOT_CONVERGED
)
from kwplan.engine.evaluate import quantile, _chunks, _summarize
from kwplan.engine.matching import match_pair, MATCHED, CAPPED
from kwplan.models.characteristics import Efficiency
from kwplan.models.sprt import SprtDesign, SprtCharacteristics, NEAREST


log = logging.getLogger(__name__)

Absorption = namedtuple(
    'Absorption',
    ['accept', 'reject', 'asn', 'stop_dist', 'residual', 'error_bound']
)


def _absorb(design, theta, tol, stage_cap):
    """
    Propagate the probability of every unabsorbed lattice state stage by
    stage until less than ``tol`` remains. The continuation set at a stage
    is a run of consecutive success counts, so only that run is carried.
    """
    up = log_likelihood_ratio_increment(design.hyp, 1)
    down = log_likelihood_ratio_increment(design.hyp, 0)
    base = 0
    mass = np.array([1.0 - theta, theta])
    accepted = rejected = 0.0
    dist = []
    residual = previous = 1.0
    n = 1
    while True:
        s = base + np.arange(mass.size)
        llr = s * up + (n - s) * down
        acc = llr <= design.log_b
        rej = llr >= design.log_a
        a_mass = float(mass[acc].sum())
        r_mass = float(mass[rej].sum())
        accepted += a_mass
        rejected += r_mass
        dist.append(a_mass + r_mass)
        live = np.flatnonzero(~(acc | rej))
        previous, residual = residual, (
            float(mass[live].sum()) if live.size else 0.0
        )
        if residual < tol:
            break
        if n >= stage_cap:
            raise NonAbsorptionError(
                SPRT_NOT_ABSORBED.format(residual, n, tol), residual
            )
        moving = mass[live[0]:live[-1] + 1]
        mass = np.zeros(moving.size + 1)
        mass[:-1] += moving * (1.0 - theta)
        mass[1:] += moving * theta
        base += int(live[0])
        n += 1

    dist = np.array(dist)
    asn = float(np.dot(np.arange(1, dist.size + 1), dist))
    ratio = residual / previous if previous > 0.0 else 0.0
    overshoot = 1.0 / (1.0 - ratio) if ratio < 1.0 else float(n)
    log.debug('SPRT absorbed at theta={} after {} stages, residual {}'.format(
        theta, n, residual))
    return Absorption(accepted, rejected, asn, dist, residual,
                      residual * (n + overshoot))


def sprt_errors(design, tol=defaults.SPRT_RESIDUAL_TOL,
                stage_cap=defaults.SPRT_STAGE_CAP):
    """(alpha, beta) of the SPRT."""
    under0 = _absorb(design, design.hyp.theta0, tol, stage_cap)
    under1 = _absorb(design, design.hyp.theta1, tol, stage_cap)
    return under0.reject, under1.accept


def sprt_characteristics(design, theta, tol=defaults.SPRT_RESIDUAL_TOL,
                         stage_cap=defaults.SPRT_STAGE_CAP):
    """
    Exact (to ``tol``) characteristics of the SPRT: error probabilities,
    ASN under theta0, theta1 and ``theta``, and the 0.99-quantile of the
    sample number under ``theta``.
    """
    theta = check_probability(float(theta))
    hyp = design.hyp
    runs = {
        hyp.theta0: _absorb(design, hyp.theta0, tol, stage_cap),
        hyp.theta1: _absorb(design, hyp.theta1, tol, stage_cap),
    }
    if theta not in runs:
        runs[theta] = _absorb(design, theta, tol, stage_cap)
    at = runs[theta]
    return SprtCharacteristics(
        alpha=runs[hyp.theta0].reject,
        beta=runs[hyp.theta1].accept,
        asn_at={t: r.asn for t, r in runs.items()},
        theta=theta,
        q99_at_star=quantile(at.stop_dist),
        residual_mass=max(r.residual for r in runs.values()),
        asn_error_bound=max(r.error_bound for r in runs.values()),
        stop_dist=at.stop_dist
    )


def wald_endpoints(alpha, beta):
    """Wald's approximate (log_b, log_a)."""
    return math.log(beta / (1.0 - alpha)), math.log((1.0 - beta) / alpha)


def _symmetric_match(hyp, alpha_nominal, beta_nominal, rel_tol, tol,
                     stage_cap):
    """
    With theta0 = 1 - theta1 the LLR moves by +-u, u = ln(theta1/theta0),
    so an SPRT is fixed by the integer step counts to each endpoint. The
    counts around Wald's endpoints are scanned exhaustively; equal nominal
    errors keep the counts equal.
    """
    u = log_likelihood_ratio_increment(hyp, 1)
    log_b, log_a = wald_endpoints(alpha_nominal, beta_nominal)
    centre_a = max(1, int(round(log_a / u + 0.5)))
    centre_b = max(1, int(round(-log_b / u + 0.5)))
    steps_a = range(max(1, centre_a - 4), centre_a + 5)
    if alpha_nominal == beta_nominal:
        pairs = [(k, k) for k in steps_a]
    else:
        pairs = [(ka, kb) for ka in steps_a
                 for kb in range(max(1, centre_b - 4), centre_b + 5)]
    best = None
    for ka, kb in pairs:
        design = SprtDesign(hyp, -(kb - 0.5) * u, (ka - 0.5) * u,
                            symmetric=True)
        alpha, beta = sprt_errors(design, tol, stage_cap)
        error = max(abs(alpha / alpha_nominal - 1.0),
                    abs(beta / beta_nominal - 1.0))
        if best is None or error < best[0]:
            best = (error, design)
    error, design = best
    status = MATCHED if error <= rel_tol else NEAREST
    log.info('Symmetric SPRT for {}: endpoints ({:.4f}, {:.4f}), error {:.3g}'
             .format(hyp, design.log_b, design.log_a, error))
    return SprtDesign(hyp, design.log_b, design.log_a, status=status,
                      symmetric=True)


def sprt_match(hyp, alpha_nominal, beta_nominal, rel_tol=defaults.REL_TOL,
               max_updates=defaults.MAX_LAMBDA_UPDATES,
               refine=defaults.MATCH_REFINE_UPDATES,
               bounds=defaults.SPRT_LOG_BOUNDS,
               tol=defaults.SPRT_RESIDUAL_TOL,
               stage_cap=defaults.SPRT_STAGE_CAP):
    """
    SPRT endpoints whose exact error probabilities match the nominal ones
    within ``rel_tol``, or the nearest achievable design with
    status "nearest". In the symmetric case theta0 = 1 - theta1 only a
    discrete set of error levels exists; the result then carries
    ``symmetric=True`` and is usually "nearest".
    """
    check_probability(alpha_nominal, 'alpha')
    check_probability(beta_nominal, 'beta')
    if hyp.is_symmetric:
        return _symmetric_match(hyp, alpha_nominal, beta_nominal, rel_tol,
                                tol, stage_cap)
    log_b, log_a = wald_endpoints(alpha_nominal, beta_nominal)

    def evaluate(upper, lower):
        design = SprtDesign(hyp, -lower, upper)
        alpha, beta = sprt_errors(design, tol, stage_cap)
        return alpha, beta, design

    result = match_pair(
        evaluate, (log_a, -log_b), (alpha_nominal, beta_nominal),
        rel_tol, bounds, max_updates, max_step=0.5, label='SPRT match',
        refine=refine
    )
    best = result.best.payload
    status = MATCHED if result.status == MATCHED else NEAREST
    design = SprtDesign(hyp, best.log_b, best.log_a, status=status)
    if result.status == CAPPED:
        raise NonConvergenceError(
            SPRT_NOT_CONVERGED.format(alpha_nominal, beta_nominal, rel_tol,
                                      max_updates),
            best=design
        )
    if status == NEAREST:
        log.warning('SPRT for {} matches alpha={} beta={} only to {:.3g}'
                    .format(hyp, alpha_nominal, beta_nominal,
                            result.best.error))
    return design


def simulate_sprt(design, theta, replications, seed,
                  chunk=defaults.SIMULATION_CHUNK,
                  stage_cap=defaults.SPRT_STAGE_CAP):
    """Monte Carlo run of the SPRT, seeded like ``evaluate.simulate``."""
    theta = check_probability(float(theta))
    if int(replications) != replications or replications < 1:
        raise DomainError(REPLICATIONS_INVALID.format(replications))
    up = log_likelihood_ratio_increment(design.hyp, 1)
    down = log_likelihood_ratio_increment(design.hyp, 0)
    sizes = _chunks(int(replications), chunk)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    accepted_total = 0
    n_sum = n_sq_sum = 0.0
    for size, child in zip(sizes, children):
        rng = np.random.Generator(np.random.PCG64(child))
        s = np.zeros(size, dtype=np.int64)
        stopped_at = np.zeros(size, dtype=np.int64)
        accepted = np.zeros(size, dtype=bool)
        active = np.ones(size, dtype=bool)
        n = 0
        while active.any():
            n += 1
            if n > stage_cap:
                raise NonAbsorptionError(
                    SPRT_NOT_ABSORBED.format(active.mean(), n - 1, 0.0),
                    float(active.mean())
                )
            idx = np.flatnonzero(active)
            s[idx] += rng.random(idx.size) < theta
            llr = s[idx] * up + (n - s[idx]) * down
            low = llr <= design.log_b
            done = low | (llr >= design.log_a)
            stopped_at[idx[done]] = n
            accepted[idx[low]] = True
            active[idx[done]] = False
        accepted_total += int(accepted.sum())
        n_sum += float(stopped_at.sum())
        n_sq_sum += float(np.square(stopped_at, dtype=float).sum())
    return _summarize(theta, int(replications), accepted_total, n_sum,
                      n_sq_sum)


def fss_exact(hyp, alpha_bound, beta_bound):
    """
    Smallest n, with its threshold k, for which the test rejecting H0 iff
    S_n >= k has P0(S_n >= k) <= alpha_bound and P1(S_n < k) <= beta_bound.

    :return: Tuple (n, k)
    """
    check_probability(alpha_bound, 'alpha')
    check_probability(beta_bound, 'beta')
    n = 0
    while True:
        n += 1
        ks = np.arange(n + 2)
        # P0(S_n >= k) for k = 0..n+1
        size = binom.sf(ks - 1, n, hyp.theta0)
        k = int(np.flatnonzero(size <= alpha_bound)[0])
        if binom.cdf(k - 1, n, hyp.theta1) <= beta_bound:
            return n, k


def fss_approx(hyp, alpha_bound, beta_bound):
    """Normal-approximation FSS; not rounded."""
    check_probability(alpha_bound, 'alpha')
    check_probability(beta_bound, 'beta')
    t0, t1 = hyp.theta0, hyp.theta1
    z_alpha = norm.isf(alpha_bound)
    z_beta = norm.isf(beta_bound)
    root = (z_alpha * math.sqrt(t0 * (1.0 - t0)) +
            z_beta * math.sqrt(t1 * (1.0 - t1))) / (t1 - t0)
    return root * root


def efficiency_ratios(fss, plan_chars, sprt_chars=None):
    """FSS over ASN and over Q.99, for the plan and optionally the SPRT."""
    r = fss / plan_chars.asn_at_star
    qr = fss / float(plan_chars.q99)
    if sprt_chars is None:
        return Efficiency(r, qr, None, None)
    return Efficiency(r, qr, fss / sprt_chars.asn_at_star,
                      fss / float(sprt_chars.q99_at_star))
