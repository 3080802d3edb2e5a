"""
Natural-sample converters.

PolyphaseNaturalConverter is the combined chain: one bank of length-(2k+1)
filters per output phase delivers s, a, b and c at rate Lup*f1, and the
nonlinear stage turns them into natural samples. TwoStageNaturalConverter is
the classic cascade (full-rate interpolation, then Stirling differences at
the high rate); StirlingNaturalConverter works at the input rate.
"""

# Import future annotations for forward references.
from __future__ import annotations

# Standard library imports
import logging
import math
from dataclasses import dataclass, field, replace

# Third-party imports
import numpy as np
import scipy.signal
from numpy.lib.stride_tricks import sliding_window_view

# Domain entities and errors.
from apps.core.entities.experiment import ConversionConfig, EdgePolicy
from apps.core.entities.filters import PolyphaseBank
from apps.core.entities.signal import SampleStream
from apps.core.exceptions import AmplitudeContractError, ConfigurationError, ShapeMismatchError

# Service interface and the stages the converters are built from.
from apps.core.services.interfaces import INaturalSampleConverter
from apps.core.services.natsamp_core import check_k_terms, count_overmodulation, natural_samples
from apps.core.services.stirling_diff import algorithm1_convert, natural_stage, pad_edges

logger = logging.getLogger(__name__)


def _check_rate(stream: SampleStream, bank: PolyphaseBank) -> None:
    if not math.isclose(stream.period, bank.kernel.input_period, rel_tol=1e-12):
        raise ConfigurationError(
            f"stream rate {stream.rate!r} Hz does not match the bank's input rate "
            f"{1.0 / bank.kernel.input_period!r} Hz"
        )


# ---------- PolyphaseNaturalConverter ----------
#  Interpolation, differentiation and the nonlinear stage in one pass.
# ---------- PolyphaseNaturalConverter ----------
@dataclass(eq=False)
class PolyphaseNaturalConverter(INaturalSampleConverter):
    """
    Combined up-sampling natural-sample converter.

    Holds the streaming state used by feed()/flush(); convert_stream() is
    stateless.
    """
    bank: PolyphaseBank
    config: ConversionConfig
    _pending: np.ndarray = field(init=False, repr=False)
    _consumed: int = field(init=False, repr=False, default=0)

    def __post_init__(self) -> None:
        if self.bank.upsampling_factor != self.config.upsampling_factor:
            raise ShapeMismatchError("bank Lup differs from the configured Lup")
        if self.bank.half_window != self.config.half_window:
            raise ShapeMismatchError("bank half window differs from the configured k")
        if self.bank.orders < self.config.k_terms - 1:
            raise ShapeMismatchError(
                f"K={self.config.k_terms} needs derivative orders up to {self.config.k_terms - 1}, "
                f"bank holds {self.bank.orders}"
            )
        self.reset()

    @property
    def half_window(self) -> int:
        return self.bank.half_window

    def output_rate(self, input_rate: float) -> float:
        return input_rate * self.bank.upsampling_factor

    def with_k(self, k_terms: int) -> PolyphaseNaturalConverter:
        return PolyphaseNaturalConverter(bank=self.bank, config=self.config.with_k(k_terms))

    # -- linear stage ---------------------------------------------------------

    def _linear(self, windows: np.ndarray) -> np.ndarray:
        """
        (orders + 1, W * Lup) rows s, a, b, c for W windows in time order.

        windows[w, i] = x[n_w - k + i]; the taps are in convolution order.
        """
        reversed_taps = self.bank.taps[:, :, ::-1]
        values = np.einsum("wi,pli->lwp", windows, reversed_taps)
        return values.reshape(self.bank.orders + 1, -1)

    def linear_stage(self, stream: SampleStream) -> np.ndarray:
        """Rate-f2 streams of s and the scaled derivatives, one row per order."""
        _check_rate(stream, self.bank)
        if len(stream) == 0:
            return np.zeros((self.bank.orders + 1, 0))
        k = self.half_window
        padded = pad_edges(stream.samples, k, self.config.edge_policy)
        return self._linear(sliding_window_view(padded, 2 * k + 1))

    def _nonlinear(self, rows: np.ndarray, k_terms: int) -> np.ndarray:
        padded = list(rows) + [np.zeros(rows.shape[1])] * (4 - rows.shape[0])
        return natural_samples(*padded[:4], k_terms)

    # -- block / stream -------------------------------------------------------

    def convert_block(self, window, k_terms: int | None = None) -> np.ndarray:
        """Lup natural samples around the centre of one (2k+1)-sample window."""
        k_terms = check_k_terms(self.config.k_terms if k_terms is None else k_terms)
        samples = np.asarray(window, dtype=np.float64)
        if samples.shape != (self.bank.taps_per_phase,):
            raise ShapeMismatchError(
                f"window needs {self.bank.taps_per_phase} samples, got shape {samples.shape}"
            )
        if self.bank.orders < k_terms - 1:
            raise ShapeMismatchError(f"bank holds no order-{k_terms - 1} taps")
        return self._nonlinear(self._linear(samples[None, :]), k_terms)

    def convert_stream(self, stream: SampleStream) -> SampleStream:
        stream.require_amplitude()
        values = self._nonlinear(self.linear_stage(stream), self.config.k_terms)
        count_overmodulation(values)
        logger.debug(
            "converted %d samples to %d at K=%d", len(stream), values.size, self.config.k_terms
        )
        return SampleStream(rate=self.output_rate(stream.rate), samples=values)

    # -- streaming --------------------------------------------------------------

    def reset(self) -> None:
        self._pending = np.zeros(self.half_window)
        self._consumed = 0

    def feed(self, chunk) -> np.ndarray:
        """
        Push input samples; return every natural sample whose window is now
        complete. Concatenated feed() + flush() output equals convert_stream()
        with zero edges.
        """
        if self.config.edge_policy is not EdgePolicy.ZERO:
            raise ConfigurationError("streaming conversion supports the zero edge policy only")
        data = np.asarray(chunk, dtype=np.float64).ravel()
        bad = np.flatnonzero(~np.isfinite(data) | (np.abs(data) >= 1.0))
        if bad.size:
            index = self._consumed + int(bad[0])
            raise AmplitudeContractError(
                f"sample {index} = {data[bad[0]]!r} violates |x| < 1",
                index=index,
                value=float(data[bad[0]]),
            )
        self._consumed += data.size
        return self._drain(np.concatenate([self._pending, data]))

    def flush(self) -> np.ndarray:
        """Zero-pad the tail, return the remaining outputs and reset."""
        out = self._drain(np.concatenate([self._pending, np.zeros(self.half_window)]))
        self.reset()
        return out

    def _drain(self, buffer: np.ndarray) -> np.ndarray:
        span = 2 * self.half_window + 1
        if buffer.size < span:
            self._pending = buffer
            return np.zeros(0)
        windows = sliding_window_view(buffer, span)
        self._pending = buffer[-(span - 1):]
        return self._nonlinear(self._linear(windows), self.config.k_terms)


# ---------- TwoStageNaturalConverter ----------
#  Full-rate interpolation followed by Algorithm I at the high rate.
# ---------- TwoStageNaturalConverter ----------
@dataclass
class TwoStageNaturalConverter(INaturalSampleConverter):
    bank: PolyphaseBank
    config: ConversionConfig

    def output_rate(self, input_rate: float) -> float:
        return input_rate * self.bank.upsampling_factor

    def with_k(self, k_terms: int) -> TwoStageNaturalConverter:
        return replace(self, config=self.config.with_k(k_terms))

    def interpolate(self, stream: SampleStream) -> SampleStream:
        """
        Zero insertion plus the full-rate interpolation filter, aligned so
        output m sits at (m + 1/2) T2 like the polyphase converter.
        """
        _check_rate(stream, self.bank)
        lup, k = self.bank.upsampling_factor, self.bank.half_window
        rate = self.output_rate(stream.rate)
        if len(stream) == 0:
            return SampleStream(rate=rate, samples=np.zeros(0))
        padded = pad_edges(stream.samples, k, self.config.edge_policy)
        full = scipy.signal.upfirdn(self.bank.direct_form(0), padded, up=lup)
        delay = 2 * lup * k  # filter group delay plus the padded history
        return SampleStream(rate=rate, samples=full[delay:delay + lup * len(stream)])

    def convert_stream(self, stream: SampleStream) -> SampleStream:
        stream.require_amplitude()
        upsampled = self.interpolate(stream)
        if len(upsampled) == 0:
            return upsampled
        return natural_stage(upsampled, self.config.k_terms, self.config.edge_policy)


# ---------- StirlingNaturalConverter ----------
@dataclass
class StirlingNaturalConverter(INaturalSampleConverter):
    """Algorithm I alone; the carrier runs at the input rate."""
    config: ConversionConfig

    def output_rate(self, input_rate: float) -> float:
        return input_rate

    def with_k(self, k_terms: int) -> StirlingNaturalConverter:
        return replace(self, config=self.config.with_k(k_terms))

    def convert_stream(self, stream: SampleStream) -> SampleStream:
        return algorithm1_convert(stream, self.config.k_terms, self.config.edge_policy)
