'''
Django settings for the mydtc project.

Prosjektet har ingen database, ingen views og ingen templates. Django brukes for
management commands (mydtc/management/commands/dtc.py), form-validering av
konfigurasjonen, logging og test runneren.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
'''

import os

# Denne setter os.environ
import dotenv
dotenv.load_dotenv(dotenv.find_dotenv())

# Vi signere ingenting, men Django nekte å start uten
SECRET_KEY = os.environ.get('DJANGO_SECRET', 'mydtc-development-secret')

DEBUG = 'DJANGO_DEBUG' in os.environ

ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'mydtc.apps.MydtcConfig',
]

# Ingen database, SimpleTestCase trenger heller ingen
DATABASES = {}

# MyDTC

MYDTC_WORKERS = int(os.environ.get('MYDTC_WORKERS', 1))
'Antall workers når --workers ikke er oppgitt'

MYDTC_OUTPUT_PREFIX = os.environ.get('MYDTC_OUTPUT_PREFIX', 'mydtc')
'Prefiks for output filene når --out ikke er oppgitt'

MYDTC_SLOW_TESTS = 'MYDTC_SLOW_TESTS' in os.environ
'Om de tunge akseptansetestene (n=10, tusenvis av trajectories) skal kjøres'

# Logging
# Følgende er en kopi av default konfigurasjonen med en mydtc logger i tillegg
# https://docs.djangoproject.com/en/4.2/ref/logging/#default-logging-definition

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "filters": {
        "require_debug_true": {
            "()": "django.utils.log.RequireDebugTrue",
        },
    },
    "formatters": {
        "mydtc": {
            "format": "[{asctime}] {levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "level": "INFO",
            "filters": ["require_debug_true"],
            "class": "logging.StreamHandler",
        },
        "mydtc": {
            "level": "DEBUG",
            "class": "logging.StreamHandler",
            "formatter": "mydtc",
        },
    },
    "loggers": {
        "django": {
            "handlers": ["console"],
            "level": "INFO",
        },
        "mydtc": {
            "handlers": ["mydtc"],
            "level": os.environ.get('MYDTC_LOG_LEVEL', 'DEBUG' if DEBUG else 'WARNING'),
            "propagate": False,
        },
    },
}
