"""
Spectral measurement and ideal low-pass demodulation.

demodulate_pwm() computes the band-limited part of a continuous-edge PWM
train from its exact Fourier series, so no rendering grid limits the
measured distortion floor.
"""

# Import future annotations for forward references.
from __future__ import annotations

# Standard library imports
import logging
import math

# Third-party imports
import numpy as np
import scipy.fft
from scipy.signal.windows import blackmanharris

# Domain entities and errors.
from apps.core.entities.pwm import PwmWaveform
from apps.core.entities.signal import SampleStream
from apps.core.entities.spectrum import SpectralLine, SpectrumReport
from apps.core.exceptions import ConfigurationError, HarmonicRangeError

logger = logging.getLogger(__name__)

WINDOWS = ("rect", "blackman_harris")
DB_FLOOR = -400.0
COHERENT_TOLERANCE = 1e-9  # in bins
# Truncation bound for the edge-phase power series in demodulate_pwm.
SERIES_TOLERANCE = 1e-18


def _db(ratio: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.maximum(20.0 * np.log10(ratio), DB_FLOOR)


def _peak_bin(magnitude: np.ndarray, centre: float) -> int:
    """
    Bin of a line at a (fractional) bin position.

    A coherent line owns its nominal bin even at the numerical floor; an
    off-grid line takes the strongest bin within +-1.
    """
    nearest = int(round(centre))
    if abs(centre - nearest) <= COHERENT_TOLERANCE:
        return min(nearest, magnitude.size - 1)
    lo, hi = max(nearest - 1, 0), min(nearest + 1, magnitude.size - 1)
    return lo + int(np.argmax(magnitude[lo:hi + 1]))


def spectrum(
    signal: SampleStream,
    window: str = "rect",
    *,
    fundamental_hz: float | None = None,
    harmonic_orders: tuple[int, ...] = (2, 3),
    pad_to_power_of_two: bool = False,
) -> SpectrumReport:
    """
    One-sided spectrum with peak-amplitude scaling.

    The fundamental is the strongest bin near `fundamental_hz` (or the
    strongest non-DC bin); THD is the summed power of every harmonic below
    Nyquist over the fundamental power.
    """
    if len(signal) == 0:
        raise ConfigurationError("cannot analyse an empty signal")
    if window not in WINDOWS:
        raise ConfigurationError(f"window must be one of {WINDOWS}, got {window!r}")
    data = signal.samples
    if window == "blackman_harris":
        taper = blackmanharris(data.size, sym=False)
    else:
        taper = np.ones(data.size)
    n_fft = data.size
    if pad_to_power_of_two:
        n_fft = 1 << (data.size - 1).bit_length()

    raw = scipy.fft.rfft(data * taper, n=n_fft)
    freqs = scipy.fft.rfftfreq(n_fft, d=signal.period)
    magnitude = np.abs(raw) * 2.0 / taper.sum()
    magnitude[0] /= 2.0
    if n_fft % 2 == 0:
        magnitude[-1] /= 2.0
    resolution = signal.rate / n_fft

    if fundamental_hz is None:
        if magnitude.size < 2:
            raise ConfigurationError("signal too short to locate a fundamental")
        fund_bin = 1 + int(np.argmax(magnitude[1:]))
    else:
        fund_bin = _peak_bin(magnitude, fundamental_hz / resolution)
    fund_freq = float(freqs[fund_bin])
    reference = magnitude[fund_bin]
    # a pure DC signal has no fundamental; its levels are relative to the DC bin
    scale = reference if reference > 0.0 else magnitude.max()
    if scale == 0.0:
        raise ConfigurationError("signal has no energy")
    levels = _db(magnitude / scale)

    nyquist = signal.rate / 2.0
    f0 = fundamental_hz if fundamental_hz is not None else fund_freq
    harmonics = []
    for order in harmonic_orders:
        frequency = order * f0
        if frequency >= nyquist:
            raise HarmonicRangeError(
                f"harmonic {order} at {frequency:g} Hz is at or above Nyquist ({nyquist:g} Hz)"
            )
        b = _peak_bin(magnitude, frequency / resolution)
        harmonics.append(
            SpectralLine(order=order, frequency=float(freqs[b]), level_db=float(levels[b]),
                         magnitude=float(magnitude[b]))
        )

    harmonic_power = 0.0
    for order in range(2, int(nyquist // f0) + 1):
        if order * f0 < nyquist:
            harmonic_power += magnitude[_peak_bin(magnitude, order * f0 / resolution)] ** 2

    return SpectrumReport(
        sample_rate=signal.rate,
        n_samples=n_fft,
        window=window,
        frequencies=freqs,
        spectrum=raw,
        magnitude_db=levels,
        fundamental=SpectralLine(order=1, frequency=fund_freq, level_db=0.0,
                                 magnitude=float(reference)),
        harmonics=tuple(harmonics),
        thd=float(harmonic_power / reference**2) if reference > 0.0 else math.inf,
    )


def demodulate(signal: SampleStream, cutoff: float) -> SampleStream:
    """Brick-wall low-pass on the DFT grid; zero phase."""
    if not 0.0 < cutoff < signal.rate / 2.0:
        raise ConfigurationError(
            f"cutoff {cutoff:g} Hz must lie in (0, {signal.rate / 2.0:g}) Hz"
        )
    if len(signal) == 0:
        return signal
    bins = scipy.fft.rfft(signal.samples)
    bins[scipy.fft.rfftfreq(len(signal), d=signal.period) > cutoff] = 0.0
    return signal.with_samples(scipy.fft.irfft(bins, n=len(signal)))


def demodulate_pwm(waveform: PwmWaveform, cutoff: float, output_rate: float) -> SampleStream:
    """
    Ideal analogue low-pass of the +-1 pulse train, sampled at output_rate.

    The train is treated as periodic over its duration D = P*T. With
    theta_j = 2 pi j / P and omega_j = 2 pi j / D its Fourier coefficients are

        c_0 = mean(2 w - 1)
        c_j = -(2 / (i omega_j D)) Sum_{r>=1} (-i theta_j)^r / r! * DFT_P(w^r)[j]

    which expands exp(-i omega_j w_k T) around the leading edge. Lines above
    the cutoff are dropped.
    """
    periods = len(waveform)
    if periods == 0:
        raise ConfigurationError("cannot demodulate an empty waveform")
    if not 0.0 < cutoff < waveform.carrier_frequency / 2.0:
        raise ConfigurationError("cutoff must lie below half the carrier frequency")
    if not 0.0 < cutoff < output_rate / 2.0:
        raise ConfigurationError("cutoff must lie below half the output rate")
    duration = waveform.duration
    n_out = int(round(duration * output_rate))
    if n_out < 1 or not math.isclose(n_out, duration * output_rate, rel_tol=1e-9):
        raise ConfigurationError("waveform duration must hold a whole number of output samples")

    top = int(math.floor(cutoff * duration + 1e-9))
    j = np.arange(1, top + 1)
    theta = 2.0 * math.pi * j / periods
    theta_max = float(theta[-1]) if top else 0.0
    terms = 1
    while theta_max**terms / math.factorial(terms) > SERIES_TOLERANCE:
        terms += 1

    widths = waveform.widths
    acc = np.zeros(top, dtype=np.complex128)
    power = np.ones(periods)
    for r in range(1, terms + 1):
        power = power * widths
        dft = scipy.fft.rfft(power)[1:top + 1]
        acc += (-1j * theta) ** r / math.factorial(r) * dft

    coefficients = np.zeros(n_out // 2 + 1, dtype=np.complex128)
    coefficients[0] = np.mean(2.0 * widths - 1.0)
    omega = 2.0 * math.pi * j / duration
    coefficients[1:top + 1] = -(2.0 / (1j * omega * duration)) * acc
    samples = scipy.fft.irfft(coefficients * n_out, n=n_out)
    logger.debug("demodulated %d periods with %d lines and %d series terms", periods, top, terms)
    return SampleStream(rate=output_rate, samples=samples)


def harmonic_levels(report: SpectrumReport, f0: float, orders) -> list[float]:
    """Level (dB re. fundamental) of the strongest bin within +-1 bin of each order*f0."""
    nyquist = report.sample_rate / 2.0
    magnitude = np.abs(report.spectrum)
    levels = []
    for order in orders:
        frequency = order * f0
        if frequency >= nyquist:
            raise HarmonicRangeError(
                f"harmonic {order} at {frequency:g} Hz is at or above Nyquist ({nyquist:g} Hz)"
            )
        b = _peak_bin(magnitude, frequency / report.bin_resolution)
        levels.append(float(report.magnitude_db[b]))
    return levels


def harmonic_trend(rows: list[dict], orders=(2, 3), threshold_db: float = 1.0) -> dict:
    """
    Describe how harmonic levels evolve across consecutive K rows.

    rows: [{"K": k, "h2_db": ..., "h3_db": ...}, ...] in sweep order. For each
    step the harmonic with the largest drop is recorded; the decay alternates
    when that harmonic changes at every step.
    """
    keys = [f"h{order}_db" for order in orders]
    steps = []
    for before, after in zip(rows, rows[1:]):
        drops = {key: before[key] - after[key] for key in keys}
        dominant = max(drops, key=drops.get)
        steps.append({
            "from_k": before["K"],
            "to_k": after["K"],
            "drops_db": drops,
            "dominant": dominant if drops[dominant] > threshold_db else None,
        })
    dominant = [step["dominant"] for step in steps]
    return {
        "non_increasing": {
            key: all(step["drops_db"][key] >= -threshold_db for step in steps) for key in keys
        },
        "steps": steps,
        "alternating": bool(dominant) and None not in dominant and all(
            a != b for a, b in zip(dominant, dominant[1:])
        ),
    }
