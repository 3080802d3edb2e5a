"""
Trailing-edge PWM synthesis: sample values to pulse widths, downcounter
quantisation and rendering to a two-level signal.

Levels are +1 while the pulse is high and -1 otherwise, so a 50 % duty
cycle has zero mean.
"""

from __future__ import annotations

import logging

import numpy as np

from apps.core.entities.pwm import FullScale, PwmWaveform
from apps.core.entities.signal import SampleStream
from apps.core.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

MIN_BITS = 4
MAX_BITS = 16


def uniform_pwm(stream: SampleStream) -> PwmWaveform:
    """One pulse per sample with width (1 + x) / 2; the carrier runs at the stream rate."""
    stream.require_amplitude(inclusive=True)
    return PwmWaveform(carrier_period=stream.period, widths=(1.0 + stream.samples) / 2.0)


def clamp_to_full_scale(stream: SampleStream) -> tuple[SampleStream, int]:
    """Clip natural values into [-1, 1]; the only place clamping happens."""
    clipped = np.clip(stream.samples, -1.0, 1.0)
    count = int(np.count_nonzero(clipped != stream.samples))
    if count:
        logger.warning("clamped %d of %d sample(s) to full scale", count, len(stream))
    return stream.with_samples(clipped), count


def _check_bits(bits: int) -> int:
    if not MIN_BITS <= bits <= MAX_BITS:
        raise ConfigurationError(f"bits must be in {MIN_BITS}..{MAX_BITS}, got {bits}")
    return int(bits)


def full_scale_count(bits: int, full_scale: FullScale | str = FullScale.UNSIGNED) -> int:
    bits = _check_bits(bits)
    return 2**bits - 1 if FullScale(full_scale) is FullScale.UNSIGNED else 2**bits


def quantize_width(w, bits: int, full_scale: FullScale | str = FullScale.UNSIGNED):
    """
    Downcounter load value for width w: round(w * full scale), ties to even.

    The rendered pulse lasts that many ticks of T / 2^B.
    """
    counts = np.rint(np.asarray(w, dtype=np.float64) * full_scale_count(bits, full_scale))
    counts = counts.astype(np.int64)
    return int(counts) if counts.ndim == 0 else counts


def quantize_waveform(
    waveform: PwmWaveform,
    bits: int,
    full_scale: FullScale | str = FullScale.UNSIGNED,
) -> PwmWaveform:
    counts = quantize_width(waveform.widths, bits, full_scale)
    return PwmWaveform(
        carrier_period=waveform.carrier_period,
        widths=counts / float(2**bits),
        bits=bits,
        counts=counts,
    )


def render_binary(waveform: PwmWaveform, oversample: int) -> SampleStream:
    """
    Two-level rendering at oversample * f_c; in each period the first
    round(w * oversample) samples are high.

    Quantised waveforms need oversample to be a multiple of 2^B so each
    edge lands on the grid.
    """
    if oversample < 1:
        raise ConfigurationError(f"oversample must be >= 1, got {oversample}")
    if waveform.is_quantized:
        ticks = 2**waveform.bits
        if oversample % ticks:
            raise ConfigurationError(
                f"oversample {oversample} cannot place {waveform.bits}-bit edges exactly; "
                f"use a multiple of {ticks}"
            )
        high = waveform.counts * (oversample // ticks)
    else:
        high = np.rint(waveform.widths * oversample).astype(np.int64)
    grid = np.arange(oversample)
    levels = np.where(grid[None, :] < high[:, None], 1.0, -1.0).ravel()
    return SampleStream(rate=oversample * waveform.carrier_frequency, samples=levels)
