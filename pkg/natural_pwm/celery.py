"""
Celery application used to evaluate independent K values of a sweep.

Workers are started with:  celery -A natural_pwm worker
"""

from __future__ import annotations

import os

from celery import Celery

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "natural_pwm.settings.base")

app = Celery("natural_pwm")

# All CELERY_* settings live in Django settings.
app.config_from_object("django.conf:settings", namespace="CELERY")

# Picks up apps/*/tasks.py
app.autodiscover_tasks()
