import flask
from celery import Celery

from kwplan.tracker import tracker


class KWCelery(Celery):
    """Celery application whose tasks run inside the Flask app context."""

    def __init__(self, *args, **kwargs):
        app = kwargs.pop('app', None)
        super(KWCelery, self).__init__(*args, **kwargs)
        self.patch_task()
        self.tracker = tracker
        self.app = None

        if app is not None:
            self.init_app(app)

    def patch_task(self):
        TaskBase = self.Task
        _celery = self

        class ContextTask(TaskBase):
            abstract = True

            def __call__(self, *args, **kwargs):
                if flask.has_app_context() or _celery.app is None:
                    return TaskBase.__call__(self, *args, **kwargs)
                with _celery.app.app_context():
                    return TaskBase.__call__(self, *args, **kwargs)

            def on_failure(self, exc, task_id, args, kwargs, einfo):
                _celery.tracker.report_exc_info(
                    (type(exc), exc, einfo.tb if einfo else None)
                )

        self.Task = ContextTask

    def init_app(self, app):
        self.app = app
        self.config_from_object(app.config['CELERY'])
