"""
Simple dependency-injection container for the core domain.

Provides factory functions that wire kernels, filter banks, converters and
the artifact repository into the experiment service.
"""

# Import future annotations for forward references.
from __future__ import annotations

# Import lru_cache to create singleton-like instances.
from functools import lru_cache

# Settings hold every experiment default.
from django.conf import settings

# Import domain entities.
from apps.core.entities.experiment import Algorithm, ConversionConfig
from apps.core.entities.filters import Kernel, PolyphaseBank

# Import concrete repository and service implementations.
from apps.core.repositories.file_repository import FileArtifactRepository
from apps.core.services.converter import (
    PolyphaseNaturalConverter,
    StirlingNaturalConverter,
    TwoStageNaturalConverter,
)
from apps.core.services.experiment_service import ExperimentService, sequential_sweep
from apps.core.services.interfaces import INaturalSampleConverter
from apps.core.services.kernel_design import build_polyphase_bank, make_kernel


def get_default_conversion_config() -> ConversionConfig:
    """
    ConversionConfig built from the NATPWM_* settings.

    Not cached: tests override settings.
    """
    return ConversionConfig(
        upsampling_factor=settings.NATPWM_LUP,
        k_terms=settings.NATPWM_K_TERMS[0],
        half_window=settings.NATPWM_HALF_WINDOW,
        kernel_support=settings.NATPWM_KERNEL_SUPPORT,
        edge_policy=settings.NATPWM_EDGE_POLICY,
        normalize_dc=settings.NATPWM_NORMALIZE_DC,
    )


@lru_cache
def get_kernel(input_rate: float, support: str, half_window: int) -> Kernel:
    return make_kernel(1.0 / input_rate, support, half_window)


@lru_cache
def get_polyphase_bank(input_rate: float, config: ConversionConfig) -> PolyphaseBank:
    """
    One immutable bank per (rate, Lup, k, support, normalisation); K does not
    affect the taps.
    """
    kernel = get_kernel(input_rate, config.kernel_support.value, config.half_window)
    return build_polyphase_bank(
        kernel,
        config.upsampling_factor,
        config.half_window,
        orders=3,
        normalize_dc=config.normalize_dc,
    )


def get_converter(algorithm: Algorithm, config: ConversionConfig, input_rate: float) -> INaturalSampleConverter:
    """
    Fresh converter per call (the polyphase converter carries streaming
    state); banks are shared.
    """
    algorithm = Algorithm(algorithm)
    if algorithm is Algorithm.ALGORITHM1:
        return StirlingNaturalConverter(config=config)
    bank = get_polyphase_bank(input_rate, config.with_k(1))
    if algorithm is Algorithm.BASELINE:
        return TwoStageNaturalConverter(bank=bank, config=config)
    return PolyphaseNaturalConverter(bank=bank, config=config)


@lru_cache
def get_experiment_service(parallel: bool | None = None) -> ExperimentService:
    """
    Return a singleton ExperimentService; with `parallel` (default
    NATPWM_PARALLEL_SWEEP) the K sweep is dispatched as a Celery group.
    """
    if parallel is None:
        parallel = settings.NATPWM_PARALLEL_SWEEP
    runner = sequential_sweep
    if parallel:
        from apps.experiments.tasks import celery_sweep

        runner = celery_sweep
    return ExperimentService(
        converter_factory=get_converter,
        repository_factory=FileArtifactRepository,
        sweep_runner=runner,
    )
