import csv
import numbers

LIST_SEPARATOR = ','
SCIENTIFIC_BELOW = 1e-3


def solve_options(config):
    """Keyword arguments for solve_kw taken from the app config."""
    return dict(
        xatol=config['OPTIMIZER_XATOL'],
        max_updates=config['MAX_LAMBDA_UPDATES'],
        log_lambda_bounds=tuple(config['LOG_LAMBDA_BOUNDS']),
        initial_clip=tuple(config['INITIAL_LOG_LAMBDA_CLIP']),
        first_horizon=config['OPTION2_FIRST_HORIZON'],
        l_rtol=config['OPTION2_L_RTOL'],
        max_horizon=config['OPTION2_MAX_HORIZON']
    )


def sprt_options(config):
    return dict(
        max_updates=config['MAX_LAMBDA_UPDATES'],
        bounds=tuple(config['SPRT_LOG_BOUNDS']),
        tol=config['SPRT_RESIDUAL_TOL'],
        stage_cap=config['SPRT_STAGE_CAP']
    )


def format_number(value):
    """
    Six significant digits; scientific notation for magnitudes below 1e-3.
    None becomes an empty field.
    """
    if value is None:
        return ''
    if isinstance(value, (bool, str)):
        return str(value)
    if isinstance(value, numbers.Integral):
        return str(int(value))
    value = float(value)
    if 0.0 < abs(value) < SCIENTIFIC_BELOW:
        return '{:.5e}'.format(value)
    return '{:.6g}'.format(value)


def write_csv(stream, columns, rows):
    """Write dict rows in ``columns`` order; missing keys stay empty."""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_number(row.get(c)) for c in columns])
