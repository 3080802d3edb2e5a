import numpy as np
from django.test import SimpleTestCase

from apps.core.entities.signal import NatBlock
from apps.core.exceptions import AmplitudeContractError, ConfigurationError
from apps.core.services.natsamp_core import count_overmodulation, natural_sample, natural_samples
from apps.core.services.reference_oracle import series_from_derivatives


class NaturalSampleTests(SimpleTestCase):
    def test_single_term_is_the_uniform_sample(self):
        self.assertEqual(natural_sample(NatBlock(0.73, 0.2, -0.1, 0.05), 1), 0.73)

    def test_zero_signal(self):
        for k in range(1, 5):
            self.assertEqual(natural_sample(NatBlock(0.0, 0.3, 0.2, 0.1), k), 0.0)

    def test_hand_evaluated_values(self):
        block = NatBlock(0.5, 0.1, 0.01, 0.001)
        self.assertAlmostEqual(natural_sample(block, 4), 0.558875, places=15)
        self.assertAlmostEqual(natural_sample(block, 3), 0.5575, places=15)
        self.assertAlmostEqual(natural_sample(block, 2), 0.55, places=15)

    def test_nesting(self):
        s, a = 0.4, 0.07
        block = NatBlock(s, a)
        self.assertAlmostEqual(natural_sample(block, 3) - natural_sample(block, 2), s * a * a, places=15)
        flat = NatBlock(s)
        self.assertEqual({natural_sample(flat, k) for k in range(1, 5)}, {s})

    def test_rejects_k_outside_range(self):
        for k in (0, 5, 2.0, True):
            with self.assertRaises(ConfigurationError):
                natural_sample(NatBlock(0.1), k)

    def test_block_amplitude_contract(self):
        with self.assertRaises(AmplitudeContractError):
            NatBlock(1.0)
        with self.assertRaises(ConfigurationError):
            NatBlock(0.1, float("inf"))

    def test_combiner_equals_four_term_series(self):
        rng = np.random.default_rng(11)
        period = 1.0 / 352800.0
        omega = 2 * np.pi * 20000.0
        x = rng.uniform(-0.95, 0.95, 1000)
        d1 = rng.uniform(-1, 1, 1000) * omega
        d2 = rng.uniform(-1, 1, 1000) * omega**2
        d3 = rng.uniform(-1, 1, 1000) * omega**3
        combined = natural_samples(
            x, period / 2 * d1, period**2 / 8 * d2, period**3 / 48 * d3, 4
        )
        series = series_from_derivatives([x, d1, d2, d3], period, 4)
        np.testing.assert_allclose(combined, series, rtol=0, atol=1e-12)

    def test_overmodulation_count(self):
        self.assertEqual(count_overmodulation(np.array([0.2, -1.01, 1.0, 1.3])), 2)
        self.assertEqual(count_overmodulation(np.zeros(3)), 0)
