"""
Domain entities for the interpolation kernel and its polyphase filter bank.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from apps.core.exceptions import ConfigurationError, ShapeMismatchError


@dataclass(frozen=True)
class Kernel:
    """
    Hamming-windowed sinc interpolation function.

    f(t) = sinc(t / T1) * (a + b cos(pi t / H)) for |t| < H, zero elsewhere.
    """
    input_period: float
    half_support: float
    window_a: float = 0.54
    window_b: float = 0.46
    max_order: int = 3

    def __post_init__(self) -> None:
        if not (math.isfinite(self.input_period) and self.input_period > 0):
            raise ConfigurationError("kernel input period must be positive")
        if not (math.isfinite(self.half_support) and self.half_support > 0):
            raise ConfigurationError("kernel half support must be positive")
        if self.max_order < 3:
            raise ConfigurationError("kernel must provide derivatives up to order 3")


@dataclass(frozen=True, eq=False)
class PolyphaseBank:
    """
    Per-phase, per-derivative-order FIR taps derived from a Kernel.

    taps[p, l, j] multiplies input sample x[n - (j - k)] to produce the
    order-l value of phase p (convolution order). Order-l taps already carry
    the (T2/2)^l / l! scaling, so the bank emits s, a, b, c directly.
    """
    kernel: Kernel
    upsampling_factor: int
    half_window: int
    phase_offsets: np.ndarray
    taps: np.ndarray
    normalized: bool = False

    def __post_init__(self) -> None:
        lup, k = self.upsampling_factor, self.half_window
        taps = np.array(self.taps, dtype=np.float64)
        offsets = np.array(self.phase_offsets, dtype=np.float64)
        if taps.ndim != 3 or taps.shape[0] != lup or taps.shape[2] != 2 * k + 1:
            raise ShapeMismatchError(
                f"taps shape {taps.shape} does not match (Lup={lup}, orders, {2 * k + 1})"
            )
        if offsets.shape != (lup,):
            raise ShapeMismatchError(f"expected {lup} phase offsets, got {offsets.shape}")
        taps.setflags(write=False)
        offsets.setflags(write=False)
        object.__setattr__(self, "taps", taps)
        object.__setattr__(self, "phase_offsets", offsets)

    @property
    def orders(self) -> int:
        """Highest derivative order held by the bank."""
        return self.taps.shape[1] - 1

    @property
    def taps_per_phase(self) -> int:
        return self.taps.shape[2]

    @property
    def output_period(self) -> float:
        return self.kernel.input_period / self.upsampling_factor

    def direct_form(self, order: int) -> np.ndarray:
        """
        Interleave the phases into the equivalent full-rate filter.

        Entry q + Lup*k holds the tap at output offset q, so the filter has a
        group delay of Lup*k samples.
        """
        return np.ascontiguousarray(self.taps[:, order, :].T).reshape(-1)
