import numpy as np
import scipy.signal
from django.test import SimpleTestCase

from apps.core.entities.experiment import ConversionConfig
from apps.core.entities.signal import SampleStream
from apps.core.exceptions import AmplitudeContractError, ConfigurationError, ShapeMismatchError
from apps.core.services.converter import (
    PolyphaseNaturalConverter,
    StirlingNaturalConverter,
    TwoStageNaturalConverter,
)
from apps.core.services.kernel_design import build_polyphase_bank, full_rate_filter, make_kernel
from apps.core.services.reference_oracle import (
    AnalyticSignal,
    InterpolatedCurve,
    root_find_natural_many,
)

RATE = 44100.0


def converter(k_terms=4, *, normalize_dc=False, edge_policy="zero", orders=3):
    kernel = make_kernel(1.0 / RATE)
    bank = build_polyphase_bank(kernel, orders=orders, normalize_dc=normalize_dc)
    config = ConversionConfig(k_terms=k_terms, edge_policy=edge_policy, normalize_dc=normalize_dc)
    return PolyphaseNaturalConverter(bank=bank, config=config)


def tone_stream(count, frequency=6600.0, amplitude=0.8):
    return AnalyticSignal.tone(frequency, amplitude).sample(RATE, count)


class PolyphaseConverterTests(SimpleTestCase):
    def test_constant_input_is_preserved_with_normalized_bank(self):
        stream = SampleStream(RATE, np.full(40, 0.6))
        out = converter(normalize_dc=True, edge_policy="periodic").convert_stream(stream)
        np.testing.assert_allclose(out.samples, 0.6, rtol=0, atol=1e-12)

    def test_zero_input(self):
        out = converter().convert_stream(SampleStream(RATE, np.zeros(25)))
        np.testing.assert_array_equal(out.samples, 0.0)

    def test_single_term_is_plain_interpolation(self):
        conv = converter(1)
        stream = tone_stream(50)
        np.testing.assert_array_equal(conv.convert_stream(stream).samples, conv.linear_stage(stream)[0])

    def test_length_and_rate(self):
        conv = converter()
        out = conv.convert_stream(tone_stream(13))
        self.assertEqual(len(out), 8 * 13)
        self.assertEqual(out.rate, 352800.0)
        self.assertEqual(len(conv.convert_stream(SampleStream(RATE, np.zeros(0)))), 0)

    def test_one_second_of_audio(self):
        out = converter().convert_stream(tone_stream(44100, 1000.0, 0.5))
        self.assertEqual(len(out), 352800)
        self.assertTrue(np.all(np.abs(out.samples) < 1.0))

    def test_block_matches_stream(self):
        conv = converter()
        window = tone_stream(9).samples
        out = conv.convert_stream(SampleStream(RATE, window)).samples
        np.testing.assert_allclose(conv.convert_block(window), out[32:40], rtol=0, atol=1e-15)
        with self.assertRaises(ShapeMismatchError):
            conv.convert_block(window[:7])

    def test_streaming_equals_whole_stream(self):
        stream = tone_stream(500)
        expected = converter().convert_stream(stream).samples
        for chunk in (1, 2, 7, 53, 600):
            conv = converter()
            parts = [conv.feed(stream.samples[i:i + chunk]) for i in range(0, len(stream), chunk)]
            parts.append(conv.flush())
            np.testing.assert_allclose(np.concatenate(parts), expected, rtol=0, atol=1e-15)

    def test_flush_resets_the_state(self):
        conv = converter()
        first = np.concatenate([conv.feed(tone_stream(20).samples), conv.flush()])
        second = np.concatenate([conv.feed(tone_stream(20).samples), conv.flush()])
        np.testing.assert_array_equal(first, second)

    def test_streaming_needs_zero_edges(self):
        with self.assertRaises(ConfigurationError):
            converter(edge_policy="periodic").feed(np.zeros(10))

    def test_amplitude_errors_carry_the_global_index(self):
        conv = converter()
        conv.feed(np.full(10, 0.1))
        with self.assertRaises(AmplitudeContractError) as ctx:
            conv.feed([0.1, 0.2, 0.3, 1.0])
        self.assertEqual(ctx.exception.index, 13)
        with self.assertRaises(AmplitudeContractError) as ctx:
            converter().convert_stream(SampleStream(RATE, [0.0, -1.0, 0.0]))
        self.assertEqual(ctx.exception.index, 1)

    def test_linear_for_single_term(self):
        conv = converter(1)
        x, y = tone_stream(64, 1000.0, 0.3), tone_stream(64, 5000.0, 0.3)
        mixed = SampleStream(RATE, 0.7 * x.samples - 0.4 * y.samples)
        expected = 0.7 * conv.convert_stream(x).samples - 0.4 * conv.convert_stream(y).samples
        np.testing.assert_allclose(conv.convert_stream(mixed).samples, expected, rtol=0, atol=1e-14)

    def test_polyphase_equals_direct_form_filtering(self):
        conv = converter()
        kernel = conv.bank.kernel
        rng = np.random.default_rng(1)
        stream = SampleStream(RATE, rng.uniform(-0.9, 0.9, 10000))
        rows = conv.linear_stage(stream)
        for order in range(4):
            direct = scipy.signal.upfirdn(full_rate_filter(kernel, 8, 4, order), stream.samples, 8)
            np.testing.assert_allclose(rows[order], direct[32:32 + 8 * len(stream)], rtol=0, atol=1e-12)

    def test_configuration_mismatches(self):
        bank = build_polyphase_bank(make_kernel(1.0 / RATE))
        with self.assertRaises(ShapeMismatchError):
            PolyphaseNaturalConverter(bank, ConversionConfig(upsampling_factor=4))
        with self.assertRaises(ShapeMismatchError):
            PolyphaseNaturalConverter(bank, ConversionConfig(half_window=3))
        with self.assertRaises(ShapeMismatchError):
            converter(4, orders=1)
        with self.assertRaises(ConfigurationError):
            converter().convert_stream(SampleStream(48000.0, np.zeros(10)))

    def test_with_k_keeps_the_bank(self):
        conv = converter(4)
        other = conv.with_k(2)
        self.assertIs(other.bank, conv.bank)
        self.assertEqual(other.config.k_terms, 2)


class OracleAccuracyTests(SimpleTestCase):
    """6.6 kHz, A = 0.8 at 44.1 kHz with an 8x carrier; errors against the fitted curve."""

    trim = 64

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.stream = tone_stream(294)
        conv = converter()
        curve = InterpolatedCurve.from_stream(cls.stream, conv.bank.kernel)
        periods = np.arange(8 * len(cls.stream))
        cls.oracle = root_find_natural_many(curve, conv.bank.output_period, periods)

    def rms_error(self, values):
        core = slice(self.trim, -self.trim)
        return float(np.sqrt(np.mean((values[core] - self.oracle[core]) ** 2)))

    def test_error_shrinks_with_k(self):
        errors = [self.rms_error(converter(k).convert_stream(self.stream).samples) for k in range(1, 5)]
        for lower, higher in zip(errors, errors[1:]):
            self.assertLessEqual(higher, lower)
        self.assertLessEqual(errors[3], 0.1 * errors[0])

    def test_combined_chain_beats_the_two_stage_baseline(self):
        conv = converter(4)
        baseline = TwoStageNaturalConverter(bank=conv.bank, config=conv.config)
        combined_error = self.rms_error(conv.convert_stream(self.stream).samples)
        baseline_error = self.rms_error(baseline.convert_stream(self.stream).samples)
        self.assertLessEqual(combined_error, baseline_error)


class OtherConverterTests(SimpleTestCase):
    def test_baseline_interpolation_matches_the_linear_stage(self):
        conv = converter(1)
        stream = tone_stream(80)
        baseline = TwoStageNaturalConverter(bank=conv.bank, config=conv.config)
        np.testing.assert_allclose(
            baseline.interpolate(stream).samples, conv.linear_stage(stream)[0], rtol=0, atol=1e-12
        )
        self.assertEqual(baseline.output_rate(RATE), 352800.0)

    def test_stirling_converter_keeps_the_rate(self):
        conv = StirlingNaturalConverter(ConversionConfig(k_terms=3))
        stream = tone_stream(30, 1000.0, 0.5)
        out = conv.convert_stream(stream)
        self.assertEqual(out.rate, RATE)
        self.assertEqual(len(out), 30)
        self.assertEqual(conv.output_rate(RATE), RATE)
        self.assertEqual(conv.with_k(1).convert_stream(stream).samples.tolist(), stream.samples.tolist())

    def test_baseline_tolerates_interpolation_overshoot(self):
        conv = converter()
        baseline = TwoStageNaturalConverter(bank=conv.bank, config=conv.config)
        step = SampleStream(RATE, np.array([0.95] * 20 + [-0.95] * 20))
        self.assertGreater(np.max(np.abs(baseline.interpolate(step).samples)), 1.0)
        with self.assertLogs("apps.core.services.natsamp_core", level="WARNING"):
            out = baseline.convert_stream(step)
        self.assertEqual(len(out), 8 * 40)
        self.assertTrue(np.all(np.isfinite(out.samples)))
        with self.assertRaises(AmplitudeContractError):
            baseline.convert_stream(SampleStream(RATE, np.array([0.2, 1.0, 0.2])))

    def test_baseline_accepts_short_inputs(self):
        kernel = make_kernel(1.0 / RATE)
        bank = build_polyphase_bank(kernel, upsampling_factor=2)
        config = ConversionConfig(k_terms=4, upsampling_factor=2)
        stream = SampleStream(RATE, np.array([0.1, 0.2, 0.3]))
        combined = PolyphaseNaturalConverter(bank=bank, config=config).convert_stream(stream)
        baseline = TwoStageNaturalConverter(bank=bank, config=config).convert_stream(stream)
        self.assertEqual(len(combined), 6)
        self.assertEqual(len(baseline), 6)
        self.assertEqual(baseline.rate, 2 * RATE)
        with self.assertRaises(ShapeMismatchError):
            StirlingNaturalConverter(config).convert_stream(stream)
