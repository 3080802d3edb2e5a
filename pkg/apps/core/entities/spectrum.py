"""
Domain entities for spectral measurements.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SpectralLine:
    order: int
    frequency: float
    level_db: float  # relative to the fundamental
    magnitude: float  # peak amplitude in signal units


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    """
    One-sided spectrum of a real signal plus the extracted tone metrics.

    `spectrum` is the raw rfft of the windowed signal; `magnitude_db` is
    relative to the measured fundamental.
    """
    sample_rate: float
    n_samples: int
    window: str
    frequencies: np.ndarray
    spectrum: np.ndarray
    magnitude_db: np.ndarray
    fundamental: SpectralLine
    harmonics: tuple[SpectralLine, ...]
    thd: float

    @property
    def bin_resolution(self) -> float:
        return self.sample_rate / self.n_samples

    def energy(self) -> float:
        """
        Time-domain energy sum(x^2) recovered from the one-sided spectrum.

        Only meaningful for the rectangular window.
        """
        power = np.abs(self.spectrum) ** 2
        weights = np.full(power.size, 2.0)
        weights[0] = 1.0
        if self.n_samples % 2 == 0:
            weights[-1] = 1.0
        return float(np.dot(weights, power) / self.n_samples)

    def as_rows(self) -> list[tuple[float, float]]:
        return list(zip(self.frequencies.tolist(), self.magnitude_db.tolist()))
