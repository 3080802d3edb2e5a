"""
Nonlinear stage: natural sample value from a signal sample and its scaled
derivatives, truncated to K series terms.
"""

from __future__ import annotations

import logging

import numpy as np

from apps.core.entities.experiment import MAX_K_TERMS
from apps.core.entities.signal import NatBlock
from apps.core.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


def check_k_terms(k_terms: int) -> int:
    if isinstance(k_terms, bool) or not isinstance(k_terms, (int, np.integer)):
        raise ConfigurationError(f"K must be an integer, got {k_terms!r}")
    if not 1 <= k_terms <= MAX_K_TERMS:
        raise ConfigurationError(f"K must be in 1..{MAX_K_TERMS}, got {k_terms}")
    return int(k_terms)


def natural_samples(s, a, b, c, k_terms: int) -> np.ndarray:
    """
    Array form of natural_sample.

      K=1: s
      K=2: s(1 + a)
      K=3: s(1 + a + a^2 + s b)
      K=4: s((1 + a)(1 + a^2) + s((3a + 1) b + s c))
    """
    k_terms = check_k_terms(k_terms)
    s = np.asarray(s, dtype=np.float64)
    if k_terms == 1:
        return s.copy()
    a = np.asarray(a, dtype=np.float64)
    if k_terms == 2:
        return s * (1.0 + a)
    b = np.asarray(b, dtype=np.float64)
    if k_terms == 3:
        return s * (1.0 + a + a * a + s * b)
    c = np.asarray(c, dtype=np.float64)
    return s * ((1.0 + a) * (1.0 + a * a) + s * ((3.0 * a + 1.0) * b + s * c))


def natural_sample(block: NatBlock, k_terms: int) -> float:
    return float(natural_samples(block.s, block.a, block.b, block.c, k_terms))


def count_overmodulation(values: np.ndarray, limit: float = 1.0) -> int:
    """Number of natural values outside [-limit, limit]; logged, never clipped."""
    count = int(np.count_nonzero(np.abs(np.asarray(values)) > limit))
    if count:
        logger.warning("%d natural sample(s) outside [-%g, %g]", count, limit, limit)
    return count
