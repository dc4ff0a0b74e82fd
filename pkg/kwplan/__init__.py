import logging

from flask import Flask

from kwplan.workers import celery
from kwplan.tracker import tracker


def create_app():
    app = Flask(__name__)

    app.config.from_object('kwplan.config')
    app.config.from_envvar('KWPLAN_CONFIG', silent=True)

    logging.basicConfig(level=app.config['LOG_LEVEL'],
                        format=app.config['LOG_FORMAT'])

    celery.init_app(app)
    tracker.init_app(app)

    return app
