"""
Experiment orchestration behind the management commands.

Reads or synthesises the source, runs the converters, and persists the
streams, spectra, diagnostics and the run manifest through the artifact
repository.
"""

# Import future annotations for forward references.
from __future__ import annotations

# Standard library imports
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from datetime import datetime, timezone

# Domain entities and errors.
from apps.core.entities.experiment import Algorithm, ConversionConfig, ExperimentSpec
from apps.core.entities.signal import SampleStream
from apps.core.exceptions import ConfigurationError, HarmonicRangeError, InputFormatError

# Repository abstraction (dependency inversion).
from apps.core.repositories.interfaces import IArtifactRepository

# DSP services.
from apps.core.services.interfaces import IExperimentService, INaturalSampleConverter
from apps.core.services.kernel_design import bank_rows, dc_gain_report, dump_bank
from apps.core.services.natsamp_core import count_overmodulation
from apps.core.services.pwm_synth import (
    clamp_to_full_scale,
    quantize_waveform,
    render_binary,
    uniform_pwm,
)
from apps.core.services.reference_oracle import AnalyticSignal
from apps.core.services.spectral import demodulate_pwm, harmonic_trend, spectrum

from natural_pwm import __version__

logger = logging.getLogger(__name__)

ConverterFactory = Callable[[Algorithm, ConversionConfig, float], INaturalSampleConverter]
RepositoryFactory = Callable[[str], IArtifactRepository]
SweepRunner = Callable[["ExperimentService", ExperimentSpec, SampleStream], list]


def sequential_sweep(service: ExperimentService, spec: ExperimentSpec, stream: SampleStream) -> list:
    return [service.evaluate_k(spec, stream, k) for k in spec.k_values]


def _is_coherent(frequency: float, rate: float, count: int) -> bool:
    cycles = frequency * count / rate
    return math.isclose(cycles, round(cycles), abs_tol=1e-9)


@dataclass
class ExperimentService(IExperimentService):
    """
    High-level experiment operations.

    Depends only on factories for converters and repositories (DIP).
    """
    converter_factory: ConverterFactory
    repository_factory: RepositoryFactory
    sweep_runner: SweepRunner = sequential_sweep

    # ---------- source ----------

    def load_source(self, spec: ExperimentSpec, repository: IArtifactRepository | None = None) -> SampleStream:
        if spec.tone is not None:
            count = int(round(spec.tone.duration * spec.input_rate))
            signal = AnalyticSignal.tone(spec.tone.frequency, spec.tone.amplitude, spec.tone.phase)
            stream = signal.sample(spec.input_rate, count)
        else:
            repository = repository or self.repository_factory(spec.output_dir)
            stream = repository.read_stream(spec.input_path, spec.input_rate)
        if len(stream) == 0:
            raise InputFormatError("input holds no samples")
        return stream

    def converter(self, spec: ExperimentSpec, k_terms: int) -> INaturalSampleConverter:
        return self.converter_factory(spec.algorithm, spec.conversion.with_k(k_terms), spec.input_rate)

    def _manifest(self, command: str, spec: ExperimentSpec, repository: IArtifactRepository,
                  diagnostics: dict) -> dict:
        manifest = {
            "command": command,
            "version": __version__,
            "created_at": datetime.now(timezone.utc).isoformat(),
            "parameters": spec.to_payload(),
            "resolved": {
                "output_rate_hz": spec.output_rate,
                "carrier_frequency_hz": spec.output_rate,
            },
            "diagnostics": diagnostics,
            "checksums": repository.checksums(),
        }
        repository.write_json("manifest.json", manifest, record=False)
        return manifest

    # ---------- conversion ----------

    def run_convert(self, spec: ExperimentSpec) -> dict:
        repository = self.repository_factory(spec.output_dir)
        stream = self.load_source(spec, repository)
        logger.info("run_convert: %d samples at %g Hz, algorithm=%s, K=%s",
                    len(stream), stream.rate, spec.algorithm.value, list(spec.k_values))

        diagnostics: dict = {"input_samples": len(stream), "runs": {}}
        converter = self.converter(spec, spec.k_values[0])
        bank = getattr(converter, "bank", None)
        if bank is not None:
            diagnostics["dc_gain"] = dc_gain_report(bank)

        for k in spec.k_values:
            converted = self.converter(spec, k).convert_stream(stream)
            name = f"converted_K{k}.csv"
            repository.write_rows(name, ("index", "value"), enumerate(converted.samples.tolist()))
            run = {
                "output_samples": len(converted),
                "overmodulated": count_overmodulation(converted.samples),
            }
            if spec.export_wav or spec.export_pwm_csv:
                rendered, run["clamped"] = self._render(spec, converted)
                if spec.export_wav:
                    repository.write_wav(f"pwm_K{k}.wav", rendered)
                if spec.export_pwm_csv:
                    repository.write_signal(f"pwm_K{k}.csv", rendered)
            diagnostics["runs"][str(k)] = run

        repository.write_json("diagnostics.json", diagnostics)
        logger.info("run_convert finished in %s", spec.output_dir)
        return self._manifest("run_convert", spec, repository, diagnostics)

    def _render(self, spec: ExperimentSpec, natural: SampleStream) -> tuple[SampleStream, int]:
        clamped, count = clamp_to_full_scale(natural)
        waveform = uniform_pwm(clamped)
        if spec.bits is not None:
            waveform = quantize_waveform(waveform, spec.bits)
        return render_binary(waveform, spec.oversample), count

    # ---------- harmonic sweep ----------

    def check_fig5(self, spec: ExperimentSpec) -> None:
        if spec.tone is None:
            raise ConfigurationError("run_fig5 needs a synthetic tone")
        if spec.cutoff_hz >= spec.input_rate / 2.0:
            raise ConfigurationError(
                f"cutoff {spec.cutoff_hz:g} Hz must lie below f1/2 = {spec.input_rate / 2.0:g} Hz"
            )
        for order in spec.harmonic_orders:
            frequency = order * spec.tone.frequency
            if frequency >= spec.cutoff_hz:
                raise HarmonicRangeError(
                    f"harmonic {order} at {frequency:g} Hz exceeds the {spec.cutoff_hz:g} Hz cutoff"
                )

    def evaluate_k(self, spec: ExperimentSpec, stream: SampleStream, k_terms: int) -> dict:
        """
        Convert, modulate, demodulate and analyse for one K. Returns JSON-ready
        data: the summary row and the spectrum as (frequency_hz, magnitude_db).
        """
        natural = self.converter(spec, k_terms).convert_stream(stream)
        clamped, count = clamp_to_full_scale(natural)
        waveform = uniform_pwm(clamped)
        if spec.bits is not None:
            waveform = quantize_waveform(waveform, spec.bits)
        baseband = demodulate_pwm(waveform, spec.cutoff_hz, spec.input_rate)

        f0 = spec.tone.frequency
        window = "rect" if _is_coherent(f0, baseband.rate, len(baseband)) else "blackman_harris"
        if window != "rect":
            logger.warning("tone is not coherent with the analysis block; using %s", window)
        report = spectrum(baseband, window, fundamental_hz=f0, harmonic_orders=spec.harmonic_orders)

        row = {"K": k_terms}
        for line in report.harmonics:
            row[f"h{line.order}_db"] = line.level_db
        row["thd"] = report.thd
        logger.info("K=%d: %s", k_terms, ", ".join(f"{key}={value:.2f}" for key, value in row.items()
                                                      if key.endswith("_db")))
        return {
            "row": row,
            "clamped": count,
            "window": window,
            "spectrum": [[f, m] for f, m in report.as_rows()],
        }

    def run_fig5(self, spec: ExperimentSpec) -> dict:
        self.check_fig5(spec)
        repository = self.repository_factory(spec.output_dir)
        stream = self.load_source(spec, repository)
        logger.info("run_fig5: K sweep %s over %d samples", list(spec.k_values), len(stream))

        results = self.sweep_runner(self, spec, stream)
        header = ["K", *(f"h{order}_db" for order in spec.harmonic_orders), "thd"]
        rows = [result["row"] for result in results]
        repository.write_rows("summary.csv", header, ([row[key] for key in header] for row in rows))
        for k, result in zip(spec.k_values, results):
            repository.write_rows(f"spectrum_K{k}.csv", ("frequency_hz", "magnitude_db"),
                                  result["spectrum"])

        trend = harmonic_trend(rows, spec.harmonic_orders)
        repository.write_json("summary.json", {"rows": rows, "trend": trend})
        rising = sorted(key for key, held in trend["non_increasing"].items() if not held)
        if rising:
            logger.warning("harmonic level rises by more than 1 dB between K steps: %s",
                           ", ".join(rising))
        diagnostics = {
            "rising": rising,
            "clamped": {str(k): r["clamped"] for k, r in zip(spec.k_values, results)},
            "window": results[0]["window"] if results else None,
        }
        return self._manifest("run_fig5", spec, repository, diagnostics)

    # ---------- filter bank ----------

    def export_bank(self, bank, repository: IArtifactRepository) -> dict:
        """Write the coefficient table as text and CSV plus its DC-gain report."""
        repository.write_text("bank.txt", dump_bank(bank))
        repository.write_rows("bank.csv", ("phase", "order", "index", "value"),
                              bank_rows(bank))
        report = dc_gain_report(bank)
        repository.write_json("dc_gain.json", report)
        return report
