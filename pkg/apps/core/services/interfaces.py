"""
Service interfaces for conversion and experiment flows.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

from apps.core.entities.experiment import ConversionConfig, ExperimentSpec
from apps.core.entities.signal import SampleStream


class INaturalSampleConverter(ABC):
    """
    Turns uniform samples into natural sample values for a PWM carrier.
    """

    config: ConversionConfig

    @abstractmethod
    def output_rate(self, input_rate: float) -> float:
        """Rate (and PWM carrier frequency) of the converted stream."""
        raise NotImplementedError

    @abstractmethod
    def convert_stream(self, stream: SampleStream) -> SampleStream:
        """
        Convert a whole finite stream. Output sample m sits at
        t = (m + 1/2) / output_rate.
        """
        raise NotImplementedError

    @abstractmethod
    def with_k(self, k_terms: int) -> INaturalSampleConverter:
        raise NotImplementedError


class IExperimentService(ABC):
    """
    Use-case level operations behind the command-line front end.
    """

    # -- conversion -----------------------------------------------------------

    @abstractmethod
    def run_convert(self, spec: ExperimentSpec) -> dict:
        """
        Convert the spec's source and persist the stream, diagnostics and a
        manifest. Returns the manifest.
        """
        raise NotImplementedError

    # -- harmonic sweep -------------------------------------------------------

    @abstractmethod
    def run_fig5(self, spec: ExperimentSpec) -> dict:
        """
        Convert, modulate, demodulate and analyse the tone once per K value.
        Returns the manifest; the summary table is one of its artifacts.
        """
        raise NotImplementedError
