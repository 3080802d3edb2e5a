"""
Shared plumbing for the experiment management commands.
"""

from __future__ import annotations

import json
import logging

from django.core.management.base import CommandError

from apps.core.exceptions import NaturalPwmError

logger = logging.getLogger(__name__)

EXIT_USAGE = 2
EXIT_FAILURE = 1


def add_experiment_arguments(parser) -> None:
    """Canonical flags; every default comes from the NATPWM_* settings."""
    parser.add_argument("--f1", type=float, help="input sample rate in Hz")
    parser.add_argument("--lup", type=int, help="upsampling factor")
    parser.add_argument("--k-terms", dest="k_terms", help="K or comma-separated K sweep")
    parser.add_argument("--algorithm", choices=["combined", "baseline", "algorithm1"])
    parser.add_argument("--tone", help="synthetic source 'frequency_hz,amplitude,duration_s'")
    parser.add_argument("--input", help="CSV or WAV source file")
    parser.add_argument("--bits", type=int, help="downcounter resolution B (continuous edges if unset)")
    parser.add_argument("--cutoff", type=float, help="demodulator cut-off in Hz")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--half-window", dest="half_window", type=int, help="k, the fit uses 2k+1 samples")
    parser.add_argument("--harmonics", help="comma-separated harmonic orders")
    parser.add_argument("--normalize-dc", dest="normalize_dc", action="store_true")
    parser.add_argument("--kernel-support", dest="kernel_support", choices=["corrected", "literal"])
    parser.add_argument("--edge-policy", dest="edge_policy", choices=["zero", "periodic"])
    parser.add_argument("--oversample", type=int, help="render samples per carrier period")
    parser.add_argument("--wav", action="store_true", help="also export the rendered PWM as WAV")
    parser.add_argument("--pwm-csv", dest="pwm_csv", action="store_true",
                        help="also export the rendered PWM as time,value CSV")


FLAG_NAMES = (
    "f1", "lup", "k_terms", "algorithm", "tone", "input", "bits", "cutoff", "out",
    "half_window", "harmonics", "normalize_dc", "kernel_support", "edge_policy",
    "oversample", "wav", "pwm_csv",
)


def flag_data(options: dict) -> dict:
    return {name: options.get(name) for name in FLAG_NAMES}


def error_line(kind: str, message: str) -> str:
    return json.dumps({"error": kind, "message": message}, sort_keys=True)


def fail(stderr, kind: str, message: str, returncode: int) -> CommandError:
    """Write the machine-readable error line and build the CommandError to raise."""
    stderr.write(error_line(kind, message))
    logger.error("%s: %s", kind, message)
    return CommandError(message, returncode=returncode)


def domain_failure(stderr, exc: Exception) -> CommandError:
    if isinstance(exc, NaturalPwmError):
        return fail(stderr, type(exc).__name__, str(exc), EXIT_USAGE)
    return fail(stderr, type(exc).__name__, str(exc), EXIT_FAILURE)
