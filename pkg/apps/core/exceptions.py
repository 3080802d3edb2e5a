"""
Domain exceptions.

Everything derives from ValueError so callers that only care about
"bad input" can keep catching that.
"""

from __future__ import annotations


class NaturalPwmError(ValueError):
    """
    Root of all domain errors raised by the toolkit.
    """


class ConfigurationError(NaturalPwmError):
    """
    Inconsistent or out-of-range parameters (rates, K, bits, cutoff, ...).
    """


class ShapeMismatchError(NaturalPwmError):
    """
    Window or filter-bank dimensions that do not fit together.
    """


class AmplitudeContractError(NaturalPwmError):
    """
    A sample violates the |x| < 1 contract (or |x| <= 1 at the PWM stage).
    """

    def __init__(self, message: str, *, index: int, value: float) -> None:
        super().__init__(message)
        self.index = index
        self.value = value


class CrossingError(NaturalPwmError):
    """
    The signal does not cross the carrier ramp exactly once in a period.
    """

    def __init__(self, message: str, *, period_index: int) -> None:
        super().__init__(message)
        self.period_index = period_index


class HarmonicRangeError(NaturalPwmError):
    """
    A requested harmonic lies at or above Nyquist or the demodulator cutoff.
    """


class InputFormatError(NaturalPwmError):
    """
    Malformed input file; `line` is 1-based (or the sample number for WAV).
    """

    def __init__(self, message: str, *, line: int | None = None) -> None:
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
