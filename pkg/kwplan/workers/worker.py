"""Entry point for Celery workers: celery -A kwplan.workers.worker:celery"""
from kwplan import create_app
from kwplan.workers import celery

app = create_app()
