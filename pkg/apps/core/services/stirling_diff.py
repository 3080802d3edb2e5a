"""
Algorithm I: same-rate natural sampling with 7-point Stirling central
differences.

The stencils return the scaled derivatives a = (T/2)x', b = (T^2/8)x'' and
c = (T^3/48)x''' directly, T being the sample period.
"""

# Import future annotations for forward references.
from __future__ import annotations

# Standard library imports
import logging
from dataclasses import dataclass
from fractions import Fraction

# Third-party imports
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

# Domain entities, errors and the shared combiner.
from apps.core.entities.experiment import EdgePolicy
from apps.core.entities.signal import SampleStream
from apps.core.exceptions import AmplitudeContractError, ShapeMismatchError
from apps.core.services.natsamp_core import count_overmodulation, natural_samples

logger = logging.getLogger(__name__)

STENCIL_LENGTH = 7
HALO = STENCIL_LENGTH // 2


@dataclass(frozen=True, eq=False)
class StirlingStencils:
    """
    Taps for window offsets -3..3, applied as sum(taps[i] * x[n + i - 3]).
    """
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    @classmethod
    def from_rationals(cls) -> StirlingStencils:
        a = [Fraction(-1, 120), Fraction(3, 40), Fraction(-3, 8), 0,
             Fraction(3, 8), Fraction(-3, 40), Fraction(1, 120)]
        b = [Fraction(1, 720), Fraction(-3, 160), Fraction(3, 16), Fraction(-49, 144),
             Fraction(3, 16), Fraction(-3, 160), Fraction(1, 720)]
        c = [Fraction(1, 384), Fraction(-1, 48), Fraction(13, 384), 0,
             Fraction(-13, 384), Fraction(1, 48), Fraction(-1, 384)]
        arrays = []
        for taps in (a, b, c):
            arr = np.array([float(t) for t in taps])
            arr.setflags(write=False)
            arrays.append(arr)
        return cls(*arrays)

    def matrix(self) -> np.ndarray:
        """(3, 7) stack of the a, b, c stencils."""
        return np.vstack([self.a, self.b, self.c])


STENCILS = StirlingStencils.from_rationals()


def stirling_derivatives(window) -> tuple[float, float, float]:
    """(a, b, c) at the centre of seven consecutive samples."""
    samples = np.asarray(window, dtype=np.float64)
    if samples.shape != (STENCIL_LENGTH,):
        raise ShapeMismatchError(
            f"Stirling window needs {STENCIL_LENGTH} samples, got shape {samples.shape}"
        )
    a, b, c = STENCILS.matrix() @ samples
    return float(a), float(b), float(c)


def pad_edges(samples: np.ndarray, halo: int, edge_policy: EdgePolicy | str) -> np.ndarray:
    """Extend a finite stream by `halo` samples on each side."""
    if EdgePolicy(edge_policy) is EdgePolicy.PERIODIC:
        return np.pad(samples, halo, mode="wrap")
    return np.pad(samples, halo, mode="constant")


def stirling_stream(samples, edge_policy: EdgePolicy | str = EdgePolicy.ZERO) -> np.ndarray:
    """
    Vectorised stencils over a whole stream.

    Returns an array of shape (3, n) holding the a, b and c streams.
    """
    data = np.asarray(samples, dtype=np.float64)
    if data.ndim != 1:
        raise ShapeMismatchError("expected a one-dimensional stream")
    if data.size == 0:
        return np.zeros((3, 0))
    windows = sliding_window_view(pad_edges(data, HALO, edge_policy), STENCIL_LENGTH)
    return STENCILS.matrix() @ windows.T


def algorithm1_convert(
    stream: SampleStream,
    k_terms: int = 4,
    edge_policy: EdgePolicy | str = EdgePolicy.ZERO,
) -> SampleStream:
    """
    One natural sample per input sample, same rate.

    Natural values outside [-1, 1] are counted and logged, not clipped.
    """
    if len(stream) < STENCIL_LENGTH:
        raise ShapeMismatchError(
            f"Algorithm I needs at least {STENCIL_LENGTH} samples, got {len(stream)}"
        )
    stream.require_amplitude()
    return natural_stage(stream, k_terms, edge_policy)


def natural_stage(
    stream: SampleStream,
    k_terms: int,
    edge_policy: EdgePolicy | str = EdgePolicy.ZERO,
) -> SampleStream:
    """
    Stencils plus combiner with no length or |x| < 1 check; interpolated
    streams may ring past full scale.
    """
    a, b, c = stirling_stream(stream.samples, edge_policy)
    values = natural_samples(stream.samples, a, b, c, k_terms)
    count_overmodulation(values)
    logger.debug("natural stage converted %d samples with K=%d", len(stream), k_terms)
    return stream.with_samples(values)


def width_from_natural(xhat, period: float):
    """Pulse width (T/2)(1 + xhat) in seconds; scalar or array."""
    values = np.asarray(xhat, dtype=np.float64)
    bad = np.flatnonzero(np.abs(np.atleast_1d(values)) > 1.0)
    if bad.size:
        index = int(bad[0])
        value = float(np.atleast_1d(values)[index])
        raise AmplitudeContractError(
            f"natural value {value!r} outside [-1, 1]", index=index, value=value
        )
    width = period / 2.0 * (1.0 + values)
    return float(width) if values.ndim == 0 else width
