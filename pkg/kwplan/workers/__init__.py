from kwplan.workers.kw_celery import KWCelery

celery = KWCelery('kwplan')
