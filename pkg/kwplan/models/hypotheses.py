from dataclasses import dataclass

from kwplan.common.errors import (
    DomainError,
    check_probability,
    HYPOTHESES_NOT_ORDERED,
    STATE_OUT_OF_RANGE,
    THETA_STAR_OUTSIDE,
    NEGATIVE_MULTIPLIER
)

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class Hypotheses:
    """Simple H0: theta = theta0 against simple H1: theta = theta1."""

    theta0: float
    theta1: float

    def __post_init__(self):
        check_probability(self.theta0, 'theta0')
        check_probability(self.theta1, 'theta1')
        if not self.theta0 < self.theta1:
            raise DomainError(
                HYPOTHESES_NOT_ORDERED.format(self.theta0, self.theta1)
            )

    @property
    def is_symmetric(self):
        return abs(self.theta0 + self.theta1 - 1.0) <= SYMMETRY_TOL

    def __repr__(self):
        return '<Hypotheses %r vs %r>' % (self.theta0, self.theta1)


@dataclass(frozen=True)
class LatticeState:
    n: int
    s: int

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.s <= self.n:
            raise DomainError(STATE_OUT_OF_RANGE.format(self.n, self.s))


@dataclass(frozen=True)
class LagrangeConfig:
    hyp: Hypotheses
    theta_star: float
    lambda0: float
    lambda1: float

    def __post_init__(self):
        if not self.hyp.theta0 < self.theta_star < self.hyp.theta1:
            raise DomainError(
                THETA_STAR_OUTSIDE.format(
                    self.theta_star, self.hyp.theta0, self.hyp.theta1
                )
            )
        for name in ('lambda0', 'lambda1'):
            value = getattr(self, name)
            if not value >= 0.0:
                raise DomainError(NEGATIVE_MULTIPLIER.format(name, value))

    def with_theta_star(self, theta_star):
        return LagrangeConfig(
            self.hyp, theta_star, self.lambda0, self.lambda1
        )
