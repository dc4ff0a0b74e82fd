from marshmallow import ValidationError

from kwplan.common.errors import (
    GRID_POINTS_INVALID,
    GRID_RANGE_INVALID,
    JOBS_INVALID,
    PROBABILITY_OUT_OF_RANGE,
    REPLICATIONS_INVALID,
    SEED_INVALID,
    TOLERANCE_INVALID
)


def probability_validator(val, name='value'):
    if not 0.0 < val < 1.0:
        _validation_error(PROBABILITY_OUT_OF_RANGE.format(name, val))
    return val


def probability_list_validator(val, name='value'):
    """Comma separated probabilities, e.g. "0.1,0.05"."""
    items = [item.strip() for item in val.split(',') if item.strip()]
    if not items:
        _validation_error('Expected a comma separated list, got "{}"'
                          .format(val))
    values = []
    for item in items:
        try:
            value = float(item)
        except ValueError:
            _validation_error('"{}" is not a number'.format(item))
        values.append(probability_validator(value, name))
    return tuple(values)


def positive_validator(val):
    if not val > 0.0:
        _validation_error(TOLERANCE_INVALID.format(val))
    return val


def replications_validator(val):
    if val is not None and val < 1:
        _validation_error(REPLICATIONS_INVALID.format(val))
    return val


def jobs_validator(val):
    """Process count for joblib; negative counts back from the CPUs."""
    if val == 0:
        _validation_error(JOBS_INVALID.format(val))
    return val


def seed_validator(val):
    if val < 0:
        _validation_error(SEED_INVALID.format(val))
    return val


def grid_points_validator(val):
    if val < 2:
        _validation_error(GRID_POINTS_INVALID.format(val))
    return val


def grid_range_validator(low, high):
    if not low < high:
        _validation_error(GRID_RANGE_INVALID.format(low, high))
    return low, high


def _validation_error(msg):
    raise ValidationError(msg)
