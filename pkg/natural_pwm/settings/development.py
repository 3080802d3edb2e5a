"""
Development overrides: verbose logging, in-process Celery.
"""

from natural_pwm.settings.base import *  # noqa: F401,F403
from natural_pwm.settings.base import LOGGING

DEBUG = True

LOGGING["loggers"]["apps"]["level"] = "DEBUG"

CELERY_TASK_ALWAYS_EAGER = True
