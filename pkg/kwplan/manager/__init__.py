from flask.cli import FlaskGroup

from kwplan import create_app


manager = FlaskGroup(
    create_app=create_app,
    add_default_commands=False,
    load_dotenv=False,
    help='Kiefer-Weiss optimal sequential plans for Bernoulli data.'
)
