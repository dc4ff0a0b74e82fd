PROBABILITY_OUT_OF_RANGE = "Expected {} in (0, 1), got {}"
HYPOTHESES_NOT_ORDERED = "Expected theta0 < theta1, got {} and {}"
STATE_OUT_OF_RANGE = "Invalid lattice state (n={}, s={}): need 0 <= s <= n"
THETA_STAR_OUTSIDE = "theta_star={} must lie strictly between {} and {}"
NEGATIVE_MULTIPLIER = "Lagrange multiplier {} must be nonnegative, got {}"
BOUND_NEEDS_MULTIPLIERS = (
    "Horizon bound needs lambda0 > 1 and lambda1 > 1, got {} and {}"
)
SINGULAR_SYSTEM = "Degenerate system for the horizon bound at theta_star={}"
HORIZON_INVALID = "Horizon must be a positive integer, got {}"
OBSERVATION_INVALID = "Observation must be 0 or 1, got {}"
PLAN_ROW_LENGTH = "Row {} must hold {} actions, got {}"
PLAN_LAST_ROW = "Row {} is the horizon and must not continue"
PLAN_ROW_ALPHABET = "Row {} holds characters outside {{C, A, R}}: {}"
MASS_NOT_NORMALIZED = "Stopping distribution sums to {}, expected 1"
LEVEL_OUT_OF_RANGE = "Quantile level must be in (0, 1), got {}"
REPLICATIONS_INVALID = "Replications must be a positive integer, got {}"
SPRT_ENDPOINTS = "Expected log_b < 0 < log_a, got log_b={} and log_a={}"
SPRT_NOT_ABSORBED = (
    "SPRT mass {} still unabsorbed after {} stages (tolerance {})"
)
LAMBDA_NOT_CONVERGED = (
    "No multipliers matched alpha={} and beta={} within {} after {} updates"
)
SPRT_NOT_CONVERGED = (
    "No SPRT endpoints matched alpha={} and beta={} within {} after {} updates"
)
METHOD_UNKNOWN = "Unknown method {}, expected one of {}"
TOLERANCE_INVALID = "Tolerance must be positive, got {}"
GRID_POINTS_INVALID = "Grid needs at least 2 points per axis, got {}"
GRID_RANGE_INVALID = "Grid range must satisfy log-min < log-max, got {} and {}"
JOBS_INVALID = "Jobs must be a nonzero integer, got {}"
SEED_INVALID = "Seed must be a nonnegative integer, got {}"
SCHEMA_VERSION_MISMATCH = "Unsupported schema version {}, expected {}"
PLAN_DOCUMENT_INVALID = "Plan document is invalid: {}"


class KWError(Exception):
    """Base class for everything kwplan raises."""


class DomainError(KWError, ValueError):
    pass


class SingularSystemError(KWError):
    pass


class DistributionError(KWError, ValueError):
    pass


class NonConvergenceError(KWError):
    """
    Raised when an iterative matcher hits its update cap.

    :param best: The best iterate found, a SolveReport or an SprtDesign
    """

    def __init__(self, message, best=None):
        super(NonConvergenceError, self).__init__(message)
        self.best = best


class NonAbsorptionError(KWError):
    def __init__(self, message, residual):
        super(NonAbsorptionError, self).__init__(message)
        self.residual = residual


class PlanDocumentError(KWError):
    def __init__(self, messages):
        super(PlanDocumentError, self).__init__(
            PLAN_DOCUMENT_INVALID.format(messages)
        )
        self.messages = messages


def check_probability(value, name='theta'):
    if not 0.0 < value < 1.0:
        raise DomainError(PROBABILITY_OUT_OF_RANGE.format(name, value))
    return value
