"""
Bernoulli likelihoods on the (n, s) lattice.

Every recursion in the engine carries probability masses in the binomially
scaled form G(n, s) = C(n, s) * theta**s * (1 - theta)**(n - s). Log space
is used only inside this module.
"""
import math
import threading

import numpy as np
from scipy.special import gammaln

from kwplan.common.errors import (
    DomainError,
    check_probability,
    OBSERVATION_INVALID
)


_log_factorials = gammaln(np.arange(1025, dtype=float) + 1.0)
_log_factorials.flags.writeable = False
_table_lock = threading.Lock()


def log_factorials(n):
    """
    Return the read-only table ln(k!) for k = 0..n (at least).

    The table grows on demand by doubling; readers get a reference to an
    array that is never mutated afterwards.
    """
    global _log_factorials
    table = _log_factorials
    if table.size > n:
        return table
    with _table_lock:
        if _log_factorials.size <= n:
            size = _log_factorials.size
            while size <= n:
                size *= 2
            grown = gammaln(np.arange(size, dtype=float) + 1.0)
            grown.flags.writeable = False
            _log_factorials = grown
        return _log_factorials


def log_binomial_row(n):
    """ln C(n, s) for s = 0..n."""
    lf = log_factorials(n)
    s = np.arange(n + 1)
    return lf[n] - lf[s] - lf[n - s]


def log_g(theta, state):
    """
    Log joint probability of one path reaching ``state``.

    :param theta: Success probability in (0, 1)
    :param state: LatticeState (n, s)
    :return: s * ln(theta) + (n - s) * ln(1 - theta)
    """
    check_probability(theta)
    return state.s * math.log(theta) + (state.n - state.s) * math.log1p(-theta)


def scaled_binomial_G(theta, state):
    """
    Binomial point mass C(n, s) * theta**s * (1 - theta)**(n - s).
    """
    check_probability(theta)
    lf = log_factorials(state.n)
    log_c = lf[state.n] - lf[state.s] - lf[state.n - state.s]
    return math.exp(log_c + log_g(theta, state))


def stage_masses(theta, n, log_c=None):
    """
    Vector of G(n, s) for s = 0..n.

    :param log_c: Optional precomputed ``log_binomial_row(n)``
    """
    if log_c is None:
        log_c = log_binomial_row(n)
    s = np.arange(n + 1)
    return np.exp(log_c + s * math.log(theta) + (n - s) * math.log1p(-theta))


def stage_masses_many(thetas, n, log_c=None):
    """G(n, s) for several theta at once; shape (len(thetas), n + 1)."""
    if log_c is None:
        log_c = log_binomial_row(n)
    thetas = np.asarray(thetas, dtype=float)
    s = np.arange(n + 1)
    return np.exp(
        log_c[None, :] +
        np.log(thetas)[:, None] * s[None, :] +
        np.log1p(-thetas)[:, None] * (n - s)[None, :]
    )


def log_likelihood_ratio_increment(hyp, x):
    """ln(f_theta1(x) / f_theta0(x)) for a single observation x."""
    if x == 1:
        return math.log(hyp.theta1 / hyp.theta0)
    if x == 0:
        return math.log((1.0 - hyp.theta1) / (1.0 - hyp.theta0))
    raise DomainError(OBSERVATION_INVALID.format(x))
