from dataclasses import dataclass, field

from kwplan.common.errors import DomainError, SPRT_ENDPOINTS


MATCHED = 'matched'
NEAREST = 'nearest'


@dataclass(frozen=True)
class SprtDesign:
    """
    Wald's SPRT on the log-likelihood-ratio walk: continue while
    log_b < LLR < log_a, accept H0 at or below log_b, reject at or above
    log_a.

    The table command prints log_b as sprt_logA and log_a as sprt_logB.
    """

    hyp: object
    log_b: float
    log_a: float
    status: str = MATCHED
    symmetric: bool = False

    def __post_init__(self):
        if not self.log_b < 0.0 < self.log_a:
            raise DomainError(SPRT_ENDPOINTS.format(self.log_b, self.log_a))


@dataclass(frozen=True)
class SprtCharacteristics:
    alpha: float
    beta: float
    asn_at: dict
    theta: float
    q99_at_star: int
    residual_mass: float
    asn_error_bound: float
    stop_dist: object = field(default=None, repr=False)

    @property
    def asn_at_star(self):
        return self.asn_at[self.theta]
