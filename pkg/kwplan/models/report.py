from collections import namedtuple
from dataclasses import dataclass, field

from kwplan.common.errors import (
    DomainError,
    check_probability,
    TOLERANCE_INVALID
)


SOLVED = 'solved'
MODIFIED_ONLY = 'modified-only'
NEAREST = 'nearest'

OPTION1 = 'option1'
OPTION2 = 'option2'
METHODS = (OPTION1, OPTION2)


@dataclass(frozen=True)
class SolveTarget:
    hyp: object
    alpha_nominal: float
    beta_nominal: float
    rel_tol: float = 0.001
    delta_tol: float = 1e-3

    def __post_init__(self):
        check_probability(self.alpha_nominal, 'alpha')
        check_probability(self.beta_nominal, 'beta')
        for value in (self.rel_tol, self.delta_tol):
            if not value > 0.0:
                raise DomainError(TOLERANCE_INVALID.format(value))


@dataclass(frozen=True)
class SolveReport:
    """
    Outcome of one solve: the multipliers and theta_star reached, the plan
    and its characteristics.

    ``status`` is "solved" when the errors match and |delta| is within
    tolerance, "modified-only" when only the errors match (the plan is then
    optimal for the modified problem at theta_star), and "nearest" when no
    multipliers matched the errors within tolerance.
    """

    theta_star: float
    lambda0: float
    lambda1: float
    plan: object = field(repr=False)
    alpha_achieved: float
    beta_achieved: float
    delta: float
    asn_at_star: float
    effective_horizon: int
    q99: int
    iterations: int
    status: str = SOLVED
    method: str = OPTION1
    horizon_bound: int = None
    fss: int = None
    efficiency: object = None
    asn_sup_theta: float = None
    edge_exceeds: bool = False
    characteristics: object = field(default=None, repr=False)


GridRecord = namedtuple('GridRecord', [
    'log_lambda0', 'log_lambda1', 'alpha', 'beta', 'n_star', 'n0', 'n1',
    'delta', 'fss_approx', 'r', 'r0', 'r1'
])
