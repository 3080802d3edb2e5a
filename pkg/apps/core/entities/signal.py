"""
Domain entities for sampled signals.

These classes are framework-agnostic and contain only data plus the
checks that keep them valid. They do NOT import Django.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from apps.core.exceptions import (
    AmplitudeContractError,
    ConfigurationError,
    ShapeMismatchError,
)


@dataclass(frozen=True, eq=False)
class SampleStream:
    """
    A rate-tagged, finite, read-only sequence of real samples.

    The |x| < 1 amplitude contract is not enforced here because rendered
    PWM signals legitimately sit at +-1; converters call
    `require_amplitude()` on ingestion instead.
    """
    rate: float
    samples: np.ndarray

    def __post_init__(self) -> None:
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise ConfigurationError(f"sample rate must be positive, got {self.rate!r}")
        data = np.array(self.samples, dtype=np.float64)
        if data.ndim != 1:
            raise ShapeMismatchError(f"samples must be one-dimensional, got shape {data.shape}")
        bad = np.flatnonzero(~np.isfinite(data))
        if bad.size:
            index = int(bad[0])
            raise AmplitudeContractError(
                f"non-finite sample at index {index}", index=index, value=float(data[index])
            )
        data.setflags(write=False)
        object.__setattr__(self, "samples", data)

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def period(self) -> float:
        return 1.0 / self.rate

    @property
    def duration(self) -> float:
        return len(self) / self.rate

    def require_amplitude(self, limit: float = 1.0, *, inclusive: bool = False) -> None:
        """
        Raise AmplitudeContractError at the first sample with |x| >= limit
        (or |x| > limit when `inclusive`).
        """
        magnitude = np.abs(self.samples)
        bad = np.flatnonzero(magnitude > limit if inclusive else magnitude >= limit)
        if bad.size:
            index = int(bad[0])
            bound = "<=" if inclusive else "<"
            raise AmplitudeContractError(
                f"sample {index} = {self.samples[index]!r} violates |x| {bound} {limit:g} "
                f"({bad.size} violation(s))",
                index=index,
                value=float(self.samples[index]),
            )

    def with_samples(self, samples: np.ndarray, rate: float | None = None) -> SampleStream:
        return SampleStream(rate=self.rate if rate is None else rate, samples=samples)


@dataclass(frozen=True)
class NatBlock:
    """
    Signal sample plus its scaled derivatives at one output instant.

    a = (T/2) x', b = (T^2/8) x'', c = (T^3/48) x''' with T the carrier period.
    """
    s: float
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0

    def __post_init__(self) -> None:
        for name in ("s", "a", "b", "c"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigurationError(f"NatBlock.{name} must be finite")
        if abs(self.s) >= 1.0:
            raise AmplitudeContractError(
                f"signal sample {self.s!r} violates |s| < 1", index=0, value=self.s
            )
