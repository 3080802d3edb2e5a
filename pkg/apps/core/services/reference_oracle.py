"""
Ground-truth generators used to validate the converters.

- AnalyticSignal: sums of sinusoids with exact derivatives.
- InterpolatedCurve: the continuous curve Sum x[n] f(t - (n + 1/2) T1) that
  the polyphase converter samples.
- root_find_natural: intersection of a signal with the carrier ramp.
- series_natural: truncated natural-sampling power series.
- theorem2_check: curve evaluation vs. FIR convolution at one instant.
"""

# Import future annotations for forward references.
from __future__ import annotations

# Standard library imports
import logging
import math
from dataclasses import dataclass
from typing import Callable

# Third-party imports
import numpy as np
from scipy.special import comb

# Domain entities and errors.
from apps.core.entities.experiment import EdgePolicy
from apps.core.entities.filters import Kernel
from apps.core.entities.signal import SampleStream
from apps.core.exceptions import ConfigurationError, CrossingError

# Kernel evaluation shared with the filter design.
from apps.core.services.kernel_design import eval_kernel, reciprocal_derivatives

logger = logging.getLogger(__name__)

SERIES_MAX_TERMS = 10
RAMP_PROBES = 64
# Periods evaluated per vectorised root-finding pass.
ROOT_CHUNK = 2048


# ---------- continuous signals ----------

@dataclass(frozen=True)
class AnalyticSignal:
    """x(t) = sum A_i sin(2 pi f_i t + phi_i), with sum |A_i| < 1."""
    components: tuple[tuple[float, float, float], ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise ConfigurationError("analytic signal needs at least one component")
        comps = tuple((float(a), float(f), float(p)) for a, f, p in self.components)
        if sum(abs(a) for a, _, _ in comps) >= 1.0:
            raise ConfigurationError("total amplitude of an analytic signal must be < 1")
        object.__setattr__(self, "components", comps)

    @classmethod
    def tone(cls, frequency: float, amplitude: float, phase: float = 0.0) -> AnalyticSignal:
        return cls(components=((amplitude, frequency, phase),))

    def derivative(self, t, order: int = 0):
        if order < 0:
            raise ConfigurationError("derivative order must be >= 0")
        times = np.asarray(t, dtype=np.float64)
        total = np.zeros_like(times)
        for amplitude, frequency, phase in self.components:
            omega = 2.0 * math.pi * frequency
            total = total + amplitude * omega**order * np.sin(omega * times + phase + order * math.pi / 2)
        return float(total) if total.ndim == 0 else total

    def __call__(self, t):
        return self.derivative(t, 0)

    def sample(self, rate: float, count: int) -> SampleStream:
        """Uniform samples taken at the half-sample instants (n + 1/2)/rate."""
        times = (np.arange(count) + 0.5) / rate
        return SampleStream(rate=rate, samples=self(times))


@dataclass(frozen=True, eq=False)
class InterpolatedCurve:
    """
    Continuous-time curve fitted through a sample stream with the kernel.

    With `normalize_dc` the curve is divided by Sum_m f(t - (m + 1/2) T1),
    matching a DC-normalised polyphase bank.
    """
    samples: np.ndarray
    kernel: Kernel
    edge_policy: EdgePolicy = EdgePolicy.ZERO
    normalize_dc: bool = False

    def __post_init__(self) -> None:
        data = np.array(self.samples, dtype=np.float64)
        data.setflags(write=False)
        object.__setattr__(self, "samples", data)
        object.__setattr__(self, "edge_policy", EdgePolicy(self.edge_policy))

    @classmethod
    def from_stream(
        cls,
        stream: SampleStream,
        kernel: Kernel,
        edge_policy: EdgePolicy | str = EdgePolicy.ZERO,
        normalize_dc: bool = False,
    ) -> InterpolatedCurve:
        if not math.isclose(stream.period, kernel.input_period, rel_tol=1e-12):
            raise ConfigurationError("stream rate does not match the kernel's input period")
        return cls(stream.samples, kernel, EdgePolicy(edge_policy), normalize_dc)

    @property
    def input_period(self) -> float:
        return self.kernel.input_period

    def _neighbourhood(self, times: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        t1 = self.input_period
        reach = int(math.ceil(self.kernel.half_support / t1)) + 1
        base = np.floor(times / t1 - 0.5).astype(np.int64)
        index = base[:, None] + np.arange(-reach, reach + 1)[None, :]
        offsets = times[:, None] - (index + 0.5) * t1
        return index, offsets

    def _weights(self, index: np.ndarray) -> np.ndarray:
        n = self.samples.size
        if self.edge_policy is EdgePolicy.PERIODIC:
            return self.samples[index % n]
        valid = (index >= 0) & (index < n)
        return np.where(valid, self.samples[np.clip(index, 0, n - 1)], 0.0)

    def derivative(self, t, order: int = 0):
        times = np.asarray(t, dtype=np.float64)
        flat = np.atleast_1d(times).ravel()
        index, offsets = self._neighbourhood(flat)
        weights = self._weights(index)
        if not self.normalize_dc:
            values = np.sum(weights * eval_kernel(self.kernel, offsets, order), axis=1)
        else:
            kernel_values = [eval_kernel(self.kernel, offsets, m) for m in range(order + 1)]
            numerators = [np.sum(weights * fv, axis=1) for fv in kernel_values]
            gains = np.stack([fv.sum(axis=1) for fv in kernel_values], axis=-1)
            inverse = reciprocal_derivatives(gains)
            values = sum(
                comb(order, m, exact=True) * numerators[m] * inverse[:, order - m]
                for m in range(order + 1)
            )
        if times.ndim == 0:
            return float(values[0])
        return values.reshape(times.shape)

    def __call__(self, t):
        return self.derivative(t, 0)


# ---------- ramp intersection ----------

def root_find_natural_many(
    signal: Callable,
    period: float,
    period_indices,
    *,
    origin: float = 0.0,
    tolerance: float = 1e-14,
    probes: int = RAMP_PROBES,
) -> np.ndarray:
    """
    Natural sample of every requested carrier period.

    In period k the ramp rises from -1 at origin + kT to +1 at origin + (k+1)T.
    The returned value is the ramp level 2u - 1 at the crossing, u being its
    position as a fraction of the period (located to tolerance * T).
    """
    indices = np.atleast_1d(np.asarray(period_indices, dtype=np.int64))
    grid = np.linspace(0.0, 1.0, probes + 1)
    result = np.empty(indices.size)

    for start in range(0, indices.size, ROOT_CHUNK):
        chunk = indices[start:start + ROOT_CHUNK]
        period_start = origin + chunk * period

        def gap(u: np.ndarray) -> np.ndarray:
            times = period_start.reshape((-1,) + (1,) * (u.ndim - 1)) + u * period
            return np.asarray(signal(times)) - (2.0 * u - 1.0)

        above = gap(np.broadcast_to(grid, (chunk.size, grid.size))) > 0.0
        changes = np.count_nonzero(above[:, 1:] != above[:, :-1], axis=1)
        bad = np.flatnonzero(changes != 1)
        if bad.size:
            k = int(chunk[bad[0]])
            kind = "no" if changes[bad[0]] == 0 else f"{changes[bad[0]]}"
            raise CrossingError(
                f"period {k}: {kind} crossing(s) with the carrier ramp "
                f"(uniqueness needs f_c > pi * signal bandwidth)",
                period_index=k,
            )
        bracket = np.argmax(above[:, :-1] & ~above[:, 1:], axis=1)
        lo, hi = grid[bracket], grid[bracket + 1]
        for _ in range(200):
            if np.max(hi - lo) <= tolerance:
                break
            mid = 0.5 * (lo + hi)
            positive = gap(mid) > 0.0
            lo = np.where(positive, mid, lo)
            hi = np.where(positive, hi, mid)
        result[start:start + chunk.size] = 2.0 * (0.5 * (lo + hi)) - 1.0

    logger.debug("root-found %d natural samples", indices.size)
    return result


def root_find_natural(signal: Callable, period: float, period_index: int, **kwargs) -> float:
    return float(root_find_natural_many(signal, period, [period_index], **kwargs)[0])


# ---------- series expansion ----------

def series_from_derivatives(derivatives, period: float, terms: int):
    """
    N-term truncation of  x + Sum_{n>=1} (T/2)^n / (n+1)! d^n/dt^n [x^(n+1)].

    `derivatives[j]` is the j-th time derivative of x (j = 0..N-1) and may be
    an array. d^n/dt^n [x^(n+1)] is n! times the h^n coefficient of the
    Taylor series of x(t + h)^(n+1).
    """
    if not 1 <= terms <= SERIES_MAX_TERMS:
        raise ConfigurationError(f"series terms must be in 1..{SERIES_MAX_TERMS}, got {terms}")
    derivs = [np.asarray(d, dtype=np.float64) for d in derivatives]
    if len(derivs) < terms:
        raise ConfigurationError(f"{terms} terms need {terms} derivatives, got {len(derivs)}")
    taylor = [derivs[j] / math.factorial(j) for j in range(terms)]

    total = taylor[0].copy()
    power = list(taylor)  # Taylor coefficients of x^1, truncated at degree N-1
    for n in range(1, terms):
        power = [
            sum(power[j] * taylor[i - j] for j in range(i + 1)) for i in range(terms)
        ]  # now x^(n+1)
        total = total + (period / 2.0) ** n / (n + 1) * power[n]
    return float(total) if total.ndim == 0 else total


def series_natural(signal: AnalyticSignal, t, terms: int, period: float):
    """Truncated series evaluated at t; the natural sample of a period is this at its centre."""
    if not 1 <= terms <= SERIES_MAX_TERMS:
        raise ConfigurationError(f"series terms must be in 1..{SERIES_MAX_TERMS}, got {terms}")
    derivatives = [signal.derivative(t, j) for j in range(terms)]
    return series_from_derivatives(derivatives, period, terms)


# ---------- fitted curve vs convolution ----------

def theorem2_check(window, tau: float, kernel: Kernel) -> tuple[float, float]:
    """
    Value at tau of the curve through a (2k+1)-sample window centred on 0,
    computed twice:

    method 1 evaluates Sum_n x[n] f(tau - n T1) directly; method 2 convolves
    the window with the taps h[n] = f(n T1 + tau).
    """
    samples = np.asarray(window, dtype=np.float64)
    if samples.ndim != 1 or samples.size % 2 == 0:
        raise ConfigurationError("window must hold an odd number of samples")
    half = samples.size // 2
    n = np.arange(-half, half + 1)
    t1 = kernel.input_period

    method1 = float(np.sum(samples * eval_kernel(kernel, tau - n * t1)))
    taps = eval_kernel(kernel, n * t1 + tau)
    method2 = float(np.dot(samples, taps[::-1]))
    return method1, method2
