import pytest
from click.testing import CliRunner

from kwplan import create_app
from kwplan.engine import solve
from kwplan.models.hypotheses import Hypotheses, LagrangeConfig


@pytest.fixture
def app():
    app = create_app()
    app.config['CELERY'] = dict(app.config['CELERY'], task_always_eager=True)
    with app.app_context():
        yield app


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture(scope='session')
def narrow_hyp():
    return Hypotheses(0.05, 0.15)


@pytest.fixture(scope='session')
def narrow_config(narrow_hyp):
    return LagrangeConfig(narrow_hyp, 0.0768, 157.70, 193.35)


@pytest.fixture(scope='session')
def narrow_plan(narrow_config):
    """
    Plan of the alpha = beta = 0.1 row for theta0=0.05, theta1=0.15, with
    theta_star optimized for the published multipliers.
    """
    return solve.optimize_theta_star(narrow_config.hyp,
                                     narrow_config.lambda0,
                                     narrow_config.lambda1).plan


@pytest.fixture(scope='session')
def wide_hyp():
    """Well separated hypotheses whose plans stay short."""
    return Hypotheses(0.3, 0.7)
