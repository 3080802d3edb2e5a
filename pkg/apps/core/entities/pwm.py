"""
Domain entities for trailing-edge PWM waveforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from apps.core.exceptions import ConfigurationError, ShapeMismatchError


class FullScale(str, Enum):
    """Count that represents a full-width pulse in the downcounter."""
    UNSIGNED = "unsigned"          # 2^B - 1, the B-bit unsigned range
    POWER_OF_TWO = "power_of_two"  # 2^B, needs one extra bit


@dataclass(frozen=True, eq=False)
class PwmWaveform:
    """
    One pulse per carrier period; the leading edge sits at k*T and the pulse
    stays high for widths[k]*T.

    Quantised waveforms also keep the downcounter counts; their widths are
    counts / 2^B exactly.
    """
    carrier_period: float
    widths: np.ndarray
    bits: int | None = None
    counts: np.ndarray | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.carrier_period) and self.carrier_period > 0):
            raise ConfigurationError("carrier period must be positive")
        widths = np.array(self.widths, dtype=np.float64)
        if widths.ndim != 1:
            raise ShapeMismatchError("widths must be one-dimensional")
        if widths.size and (not np.all(np.isfinite(widths)) or widths.min() < 0.0 or widths.max() > 1.0):
            raise ConfigurationError("pulse widths must lie in [0, 1]")
        widths.setflags(write=False)
        object.__setattr__(self, "widths", widths)
        if self.counts is not None:
            counts = np.array(self.counts, dtype=np.int64)
            if counts.shape != widths.shape:
                raise ShapeMismatchError("counts and widths differ in length")
            counts.setflags(write=False)
            object.__setattr__(self, "counts", counts)

    def __len__(self) -> int:
        return int(self.widths.size)

    @property
    def carrier_frequency(self) -> float:
        return 1.0 / self.carrier_period

    @property
    def duration(self) -> float:
        return len(self) * self.carrier_period

    @property
    def is_quantized(self) -> bool:
        return self.bits is not None

    def trailing_edges(self) -> np.ndarray:
        """Absolute trailing-edge times in seconds."""
        return (np.arange(len(self)) + self.widths) * self.carrier_period
