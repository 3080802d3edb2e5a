import numpy as np
from django.test import SimpleTestCase

from apps.core.entities.pwm import PwmWaveform
from apps.core.entities.signal import SampleStream
from apps.core.exceptions import ConfigurationError, HarmonicRangeError
from apps.core.services.pwm_synth import uniform_pwm
from apps.core.services.reference_oracle import AnalyticSignal, root_find_natural_many
from apps.core.services.spectral import (
    demodulate,
    demodulate_pwm,
    harmonic_levels,
    harmonic_trend,
    spectrum,
)

RATE = 44100.0
CARRIER = 352800.0


class SpectrumTests(SimpleTestCase):
    def test_coherent_tone(self):
        stream = AnalyticSignal.tone(1000.0, 0.5).sample(RATE, 4410)
        report = spectrum(stream, fundamental_hz=1000.0)
        self.assertAlmostEqual(report.fundamental.magnitude, 0.5, delta=1e-12)
        self.assertAlmostEqual(report.fundamental.frequency, 1000.0, places=6)
        others = np.delete(report.magnitude_db, 100)
        self.assertLess(others.max(), -200.0)
        self.assertLess(report.thd, 1e-20)

    def test_blackman_harris_keeps_peak_scaling(self):
        stream = AnalyticSignal.tone(1000.0, 0.5).sample(RATE, 4410)
        report = spectrum(stream, "blackman_harris", fundamental_hz=1000.0)
        self.assertAlmostEqual(report.fundamental.magnitude, 0.5, delta=1e-9)

    def test_constant_signal(self):
        report = spectrum(SampleStream(RATE, np.full(64, 0.5)), harmonic_orders=())
        self.assertAlmostEqual(abs(report.spectrum[0]) / 64, 0.5, delta=1e-15)
        self.assertLess(report.fundamental.magnitude, 1e-15)

    def test_energy_is_preserved(self):
        data = np.random.default_rng(8).uniform(-1, 1, 1000)
        report = spectrum(SampleStream(RATE, data), harmonic_orders=())
        self.assertAlmostEqual(report.energy(), float(np.sum(data**2)), delta=1e-9)

    def test_padding_and_validation(self):
        stream = AnalyticSignal.tone(1000.0, 0.5).sample(RATE, 1000)
        self.assertEqual(spectrum(stream, pad_to_power_of_two=True).n_samples, 1024)
        with self.assertRaises(ConfigurationError):
            spectrum(stream, "hann")
        with self.assertRaises(ConfigurationError):
            spectrum(SampleStream(RATE, np.zeros(0)))
        with self.assertRaises(HarmonicRangeError):
            spectrum(stream, fundamental_hz=10000.0, harmonic_orders=(3,))

    def test_harmonic_bins(self):
        stream = AnalyticSignal.tone(6600.0, 0.8).sample(RATE, 147 * 10)
        report = spectrum(stream, fundamental_hz=6600.0)
        h2, h3 = report.harmonics
        self.assertAlmostEqual(h2.frequency, 13200.0, places=6)
        self.assertAlmostEqual(h3.frequency, 19800.0, places=6)
        self.assertLess(max(h2.level_db, h3.level_db), -180.0)
        self.assertEqual(harmonic_levels(report, 6600.0, (2, 3)), [h2.level_db, h3.level_db])

    def test_coherent_harmonic_keeps_its_bin_under_neighbour_noise(self):
        count = 147 * 10
        t = np.arange(count) / RATE
        stray = 1e-12 * np.sin(2 * np.pi * 13170.0 * t)
        stream = SampleStream(RATE, AnalyticSignal.tone(6600.0, 0.8).sample(RATE, count).samples + stray)
        report = spectrum(stream, fundamental_hz=6600.0)
        self.assertAlmostEqual(report.harmonics[0].frequency, 13200.0, places=6)
        self.assertLess(report.harmonics[0].level_db, -180.0)


class DemodulateTests(SimpleTestCase):
    def setUp(self):
        t = (np.arange(4410) + 0.5) / RATE
        self.low = 0.4 * np.sin(2 * np.pi * 1000.0 * t)
        self.stream = SampleStream(RATE, self.low + 0.3 * np.sin(2 * np.pi * 15000.0 * t))

    def test_passband_and_stopband(self):
        out = demodulate(self.stream, 10000.0)
        np.testing.assert_allclose(out.samples, self.low, rtol=0, atol=1e-10)

    def test_idempotent(self):
        once = demodulate(self.stream, 10000.0)
        np.testing.assert_allclose(demodulate(once, 10000.0).samples, once.samples, rtol=0, atol=1e-12)

    def test_cutoff_range(self):
        for cutoff in (0.0, RATE / 2):
            with self.assertRaises(ConfigurationError):
                demodulate(self.stream, cutoff)


class PwmDemodulationTests(SimpleTestCase):
    periods = 1176  # 22 cycles of 6.6 kHz

    def test_constant_width(self):
        out = demodulate_pwm(PwmWaveform(1.0 / CARRIER, np.full(self.periods, 0.75)), 20000.0, RATE)
        self.assertEqual(len(out), 147)
        np.testing.assert_allclose(out.samples, 0.5, rtol=0, atol=1e-12)

    def test_duration_and_cutoff_checks(self):
        with self.assertRaises(ConfigurationError):
            demodulate_pwm(PwmWaveform(1.0 / CARRIER, np.full(1001, 0.5)), 20000.0, RATE)
        with self.assertRaises(ConfigurationError):
            demodulate_pwm(PwmWaveform(1.0 / CARRIER, np.full(self.periods, 0.5)), 200000.0, RATE)

    def test_natural_pwm_is_clean_and_uniform_pwm_is_not(self):
        signal = AnalyticSignal.tone(6600.0, 0.8)
        natural = root_find_natural_many(signal, 1.0 / CARRIER, np.arange(self.periods))
        natural_report = spectrum(
            demodulate_pwm(PwmWaveform(1.0 / CARRIER, (1.0 + natural) / 2.0), 20000.0, RATE),
            fundamental_hz=6600.0,
        )
        in_band = natural_report.frequencies <= 20000.0
        fundamental = np.argmin(np.abs(natural_report.frequencies - 6600.0))
        in_band[fundamental] = False
        self.assertLessEqual(natural_report.magnitude_db[in_band].max(), -60.0)

        uniform = uniform_pwm(signal.sample(CARRIER, self.periods))
        uniform_report = spectrum(demodulate_pwm(uniform, 20000.0, RATE), fundamental_hz=6600.0)
        natural_worst = max(line.level_db for line in natural_report.harmonics)
        uniform_worst = max(line.level_db for line in uniform_report.harmonics)
        self.assertGreaterEqual(uniform_worst - natural_worst, 20.0)


class HarmonicTrendTests(SimpleTestCase):
    def test_alternating_decay(self):
        rows = [
            {"K": 1, "h2_db": -33.0, "h3_db": -62.0},
            {"K": 2, "h2_db": -89.0, "h3_db": -62.0},
            {"K": 3, "h2_db": -95.0, "h3_db": -112.0},
            {"K": 4, "h2_db": -125.0, "h3_db": -120.0},
        ]
        trend = harmonic_trend(rows)
        self.assertTrue(trend["alternating"])
        self.assertEqual(trend["non_increasing"], {"h2_db": True, "h3_db": True})
        self.assertEqual([s["dominant"] for s in trend["steps"]], ["h2_db", "h3_db", "h2_db"])

    def test_rise_is_reported(self):
        rows = [
            {"K": 1, "h2_db": -60.0, "h3_db": -70.0},
            {"K": 2, "h2_db": -57.0, "h3_db": -80.0},
            {"K": 3, "h2_db": -58.0, "h3_db": -90.0},
        ]
        trend = harmonic_trend(rows)
        self.assertFalse(trend["non_increasing"]["h2_db"])
        self.assertFalse(trend["alternating"])
