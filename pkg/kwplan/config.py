from kombu import Exchange, Queue


ENVIRONMENT = 'development'
DEBUG = False

LOG_LEVEL = 'INFO'
LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

# Scalar optimizer (asn_sup and the theta_star search)
OPTIMIZER_XATOL = 1e-4
SCAN_POINTS = 17

# Lagrange multiplier matching
REL_TOL = 0.001
DELTA_TOL = 1e-3
MAX_LAMBDA_UPDATES = 200
MATCH_REFINE_UPDATES = 12
LOG_LAMBDA_BOUNDS = (0.5, 16.0)
INITIAL_LOG_LAMBDA_CLIP = (6.0, 13.0)

# Option 2 horizon schedule
OPTION2_FIRST_HORIZON = 16
OPTION2_L_RTOL = 1e-9
OPTION2_MAX_HORIZON = 1 << 14

# SPRT lattice evaluator
SPRT_RESIDUAL_TOL = 1e-12
SPRT_STAGE_CAP = 10 ** 6
SPRT_LOG_BOUNDS = (1e-6, 25.0)

SIMULATION_CHUNK = 100000

GRID_POINTS = 25
GRID_LOG_MIN = 6.0
GRID_LOG_MAX = 13.0

DEFAULT_LEVELS = (0.1, 0.05, 0.025, 0.01, 0.005, 0.001, 0.0005)

SCHEMA_VERSION = 'kw-plan/1'

CELERY = dict(
    broker_url='amqp://',
    result_backend='rpc://',
    task_always_eager=True,
    task_eager_propagates=True,
    task_serializer='json',
    result_serializer='json',
    accept_content=['json'],
    imports=['kwplan.workers.tasks'],
    result_expires=3600,
    task_queues=(
        Queue(
            name='grid_sweep',
            exchange=Exchange('grid_sweep'),
            routing_key='grid_sweep'
        ),
    ),
    task_routes={
        'kwplan.workers.tasks.sweep_point': {
            'queue': 'grid_sweep',
            'routing_key': 'grid_sweep'
        },
        'kwplan.workers.tasks.solve_level': {
            'queue': 'grid_sweep',
            'routing_key': 'grid_sweep'
        }
    }
)

ROLLBAR_TOKEN = None
