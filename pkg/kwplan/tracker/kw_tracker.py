import logging
import os

import rollbar


log = logging.getLogger(__name__)


class KWTracker(object):
    """
    Rollbar reporting, switched on only when ROLLBAR_TOKEN is configured.
    """

    def __init__(self):
        self.tracker = rollbar
        self.enabled = False

    def init_app(self, app):
        token = app.config.get('ROLLBAR_TOKEN')
        self.enabled = bool(token)
        if not self.enabled:
            log.debug('ROLLBAR_TOKEN not set, error reporting is off')
            return
        self.tracker.init(
            token,
            app.config['ENVIRONMENT'],
            root=os.path.dirname(os.path.realpath(__file__)),
            allow_logging_basic_config=False
        )

    def report_exc_info(self, exc_info=None):
        if self.enabled:
            self.tracker.report_exc_info(exc_info)
