from setuptools import setup, find_packages

setup(
    name='kwplan',
    version='0.0.1',

    packages=find_packages(exclude=['tests', 'tests.*']),
    entry_points={
        'console_scripts': [
            'kw_manage = kwplan.manager.manage:main'
        ]
    },
    install_requires=[
        'celery',
        'click',
        'flask',
        'joblib',
        'kombu',
        'marshmallow>=3',
        'numpy',
        'rollbar',
        'scipy'
    ]
)
