"""
Production overrides: real workers behind a broker, quieter logs.
"""

from decouple import config

from natural_pwm.settings.base import *  # noqa: F401,F403
from natural_pwm.settings.base import LOGGING

DEBUG = False

LOGGING["loggers"]["apps"]["level"] = config("LOG_LEVEL", default="WARNING")

CELERY_TASK_ALWAYS_EAGER = False
NATPWM_PARALLEL_SWEEP = config("NATPWM_PARALLEL_SWEEP", default=True, cast=bool)
