"""
Base Django settings for the natural-sampling PWM toolkit.

These settings are environment-agnostic; environment-specific overrides
should live in development.py / production.py.

Every experiment default can be overridden from the environment or a .env
file; command-line flags override these in turn.
"""

# Standard library imports
from pathlib import Path
# Third-party imports
from decouple import Csv, config  # Reads values from environment / .env

# Project root (…/natural_pwm)
BASE_DIR = Path(__file__).resolve().parent.parent.parent

# Not used for signing anything yet, but Django expects it to exist.
SECRET_KEY = config("SECRET_KEY", default="natural-pwm-local-key")

DEBUG = config("DEBUG", default=False, cast=bool)

# Application definition
INSTALLED_APPS = [
    # Domain entities, DSP services, repositories and the DI container.
    "apps.core",
    # Command-line experiments (management commands, forms, Celery tasks).
    "apps.experiments",
]

# No ORM models: every artifact is a file written by the repository layer.
DATABASES = {}

LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = False
USE_TZ = True

# ---------- experiment defaults ----------
# Rates follow the CD-to-carrier chain: 44.1 kHz in, 8x up to 352.8 kHz.
# ---------- experiment defaults ----------
NATPWM_F1 = config("NATPWM_F1", default=44100.0, cast=float)
NATPWM_LUP = config("NATPWM_LUP", default=8, cast=int)
# Comma separated; run_convert uses the first entry.
NATPWM_K_TERMS = config("NATPWM_K_TERMS", default="4", cast=Csv(int))
# 2k+1 input samples per fitted curve.
NATPWM_HALF_WINDOW = config("NATPWM_HALF_WINDOW", default=4, cast=int)
NATPWM_CUTOFF_HZ = config("NATPWM_CUTOFF_HZ", default=20000.0, cast=float)
# frequency_hz,amplitude,duration_s
NATPWM_TONE = config("NATPWM_TONE", default="6600,0.8,1.0")
NATPWM_HARMONICS = config("NATPWM_HARMONICS", default="2,3", cast=Csv(int))
# "corrected" (+-k*T1) or "literal" (+-32*T1).
NATPWM_KERNEL_SUPPORT = config("NATPWM_KERNEL_SUPPORT", default="corrected")
NATPWM_EDGE_POLICY = config("NATPWM_EDGE_POLICY", default="zero")
NATPWM_NORMALIZE_DC = config("NATPWM_NORMALIZE_DC", default=False, cast=bool)
NATPWM_OVERSAMPLE = config("NATPWM_OVERSAMPLE", default=256, cast=int)
NATPWM_OUTPUT_DIR = config("NATPWM_OUTPUT_DIR", default=str(BASE_DIR / "runs"))
# Dispatch the K sweep as a Celery group instead of a plain loop.
NATPWM_PARALLEL_SWEEP = config("NATPWM_PARALLEL_SWEEP", default=False, cast=bool)

# ---------- Celery ----------
CELERY_BROKER_URL = config("CELERY_BROKER_URL", default="redis://localhost:6379/0")
CELERY_RESULT_BACKEND = config("CELERY_RESULT_BACKEND", default="redis://localhost:6379/1")
# Eager by default so a sweep runs in-process without a broker.
CELERY_TASK_ALWAYS_EAGER = config("CELERY_TASK_ALWAYS_EAGER", default=True, cast=bool)
CELERY_TASK_EAGER_PROPAGATES = True
CELERY_TASK_SERIALIZER = "json"
CELERY_RESULT_SERIALIZER = "json"
CELERY_ACCEPT_CONTENT = ["json"]

# ---------- logging ----------
LOG_LEVEL = config("LOG_LEVEL", default="INFO")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(asctime)s %(levelname)s %(name)s %(message)s"},
    },
    "handlers": {
        # stderr keeps stdout free for command output.
        "console": {"class": "logging.StreamHandler", "formatter": "plain"},
    },
    "loggers": {
        "apps": {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False},
        "natural_pwm": {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False},
    },
}
