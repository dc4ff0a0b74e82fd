from flask import Flask

from kwplan.tracker.kw_tracker import KWTracker


class FakeRollbar(object):
    def __init__(self):
        self.calls = []

    def init(self, token, environment, **kwargs):
        self.calls.append(('init', token, environment))

    def report_exc_info(self, exc_info=None):
        self.calls.append(('report', exc_info))


def _tracker(token):
    app = Flask(__name__)
    app.config.update(ROLLBAR_TOKEN=token, ENVIRONMENT='test')
    tracker = KWTracker()
    tracker.tracker = FakeRollbar()
    tracker.init_app(app)
    return tracker


def test_disabled_without_token():
    tracker = _tracker(None)
    tracker.report_exc_info()
    assert not tracker.enabled
    assert tracker.tracker.calls == []


def test_reports_with_token():
    tracker = _tracker('secret')
    tracker.report_exc_info('info')
    assert tracker.enabled
    assert tracker.tracker.calls == [('init', 'secret', 'test'),
                                     ('report', 'info')]
