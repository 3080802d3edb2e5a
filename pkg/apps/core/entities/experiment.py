"""
Domain entities describing conversions and experiments.

Plain data with validation; defaults that come from Django settings are
resolved by the DI container, not here.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from enum import Enum
from typing import Any

from apps.core.exceptions import ConfigurationError

MAX_K_TERMS = 4


class Algorithm(str, Enum):
    COMBINED = "combined"      # polyphase interpolation + derivatives, then the K-term width
    BASELINE = "baseline"      # interpolate, then Algorithm I at the high rate
    ALGORITHM1 = "algorithm1"  # Algorithm I at the input rate


class KernelSupport(str, Enum):
    CORRECTED = "corrected"  # window spans +-k*T1
    LITERAL = "literal"      # window spans +-32*T1


class EdgePolicy(str, Enum):
    ZERO = "zero"          # zero-padded history at both ends
    PERIODIC = "periodic"  # circular extension, for coherent analysis


@dataclass(frozen=True)
class ConversionConfig:
    upsampling_factor: int = 8
    k_terms: int = 4
    half_window: int = 4
    kernel_support: KernelSupport = KernelSupport.CORRECTED
    edge_policy: EdgePolicy = EdgePolicy.ZERO
    normalize_dc: bool = False

    def __post_init__(self) -> None:
        if self.upsampling_factor < 2:
            raise ConfigurationError(f"Lup must be >= 2, got {self.upsampling_factor}")
        if not 1 <= self.k_terms <= MAX_K_TERMS:
            raise ConfigurationError(f"K must be in 1..{MAX_K_TERMS}, got {self.k_terms}")
        if self.half_window < 1:
            raise ConfigurationError(f"half window k must be >= 1, got {self.half_window}")
        object.__setattr__(self, "kernel_support", KernelSupport(self.kernel_support))
        object.__setattr__(self, "edge_policy", EdgePolicy(self.edge_policy))

    def with_k(self, k_terms: int) -> ConversionConfig:
        return replace(self, k_terms=k_terms)


@dataclass(frozen=True)
class ToneSpec:
    """Synthetic sinusoid A*sin(2*pi*f*t + phase)."""
    frequency: float
    amplitude: float
    duration: float
    phase: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.frequency) and self.frequency > 0):
            raise ConfigurationError("tone frequency must be positive")
        if not 0.0 <= self.amplitude < 1.0:
            raise ConfigurationError("tone amplitude must satisfy 0 <= A < 1")
        if not (math.isfinite(self.duration) and self.duration > 0):
            raise ConfigurationError("tone duration must be positive")

    @classmethod
    def parse(cls, text: str) -> ToneSpec:
        """Parse "frequency_hz,amplitude,duration_s"."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ConfigurationError(f"tone must be 'f,amp,dur', got {text!r}")
        try:
            frequency, amplitude, duration = (float(p) for p in parts)
        except ValueError as exc:
            raise ConfigurationError(f"tone must be numeric 'f,amp,dur', got {text!r}") from exc
        return cls(frequency=frequency, amplitude=amplitude, duration=duration)


@dataclass(frozen=True)
class ExperimentSpec:
    """
    Everything that affects the output of run_convert / run_fig5.

    Exactly one of `tone` and `input_path` is set.
    """
    input_rate: float
    conversion: ConversionConfig
    algorithm: Algorithm
    k_values: tuple[int, ...]
    cutoff_hz: float
    output_dir: str
    tone: ToneSpec | None = None
    input_path: str | None = None
    bits: int | None = None
    harmonic_orders: tuple[int, ...] = (2, 3)
    oversample: int = 256
    export_wav: bool = False
    export_pwm_csv: bool = False

    def __post_init__(self) -> None:
        if not (math.isfinite(self.input_rate) and self.input_rate > 0):
            raise ConfigurationError("input rate must be positive")
        if (self.tone is None) == (self.input_path is None):
            raise ConfigurationError("give exactly one of a tone or an input file")
        if not self.k_values:
            raise ConfigurationError("at least one K value is required")
        for k in self.k_values:
            if not 1 <= k <= MAX_K_TERMS:
                raise ConfigurationError(f"K must be in 1..{MAX_K_TERMS}, got {k}")
        if self.bits is not None and not 4 <= self.bits <= 16:
            raise ConfigurationError(f"bits must be in 4..16, got {self.bits}")
        if not self.cutoff_hz > 0:
            raise ConfigurationError("cutoff must be positive")
        if any(order < 2 for order in self.harmonic_orders):
            raise ConfigurationError("harmonic orders start at 2")
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        object.__setattr__(self, "k_values", tuple(int(k) for k in self.k_values))
        object.__setattr__(self, "harmonic_orders", tuple(int(h) for h in self.harmonic_orders))

    @property
    def output_rate(self) -> float:
        if self.algorithm is Algorithm.ALGORITHM1:
            return self.input_rate
        return self.input_rate * self.conversion.upsampling_factor

    def to_payload(self) -> dict[str, Any]:
        """JSON-ready dict; the inverse of from_payload()."""
        payload = asdict(self)
        payload["algorithm"] = self.algorithm.value
        payload["conversion"]["kernel_support"] = self.conversion.kernel_support.value
        payload["conversion"]["edge_policy"] = self.conversion.edge_policy.value
        payload["k_values"] = list(self.k_values)
        payload["harmonic_orders"] = list(self.harmonic_orders)
        return payload

    @classmethod
    def from_payload(cls, payload: dict[str, Any]) -> ExperimentSpec:
        data = dict(payload)
        data["conversion"] = ConversionConfig(**data["conversion"])
        data["tone"] = ToneSpec(**data["tone"]) if data.get("tone") else None
        data["k_values"] = tuple(data["k_values"])
        data["harmonic_orders"] = tuple(data.get("harmonic_orders", (2, 3)))
        return cls(**data)
