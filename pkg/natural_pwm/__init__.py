"""
Natural-sampling PWM conversion toolkit.

Importing the Celery app here makes shared_task use it when Django starts.
"""

from __future__ import annotations

from natural_pwm.celery import app as celery_app

__version__ = "0.3.0"

__all__ = ("celery_app", "__version__")
