from django.test import SimpleTestCase, override_settings

from apps.core.di.container import get_converter, get_default_conversion_config, get_polyphase_bank
from apps.core.entities.experiment import ConversionConfig, EdgePolicy
from apps.core.services.converter import (
    PolyphaseNaturalConverter,
    StirlingNaturalConverter,
    TwoStageNaturalConverter,
)


class ContainerTests(SimpleTestCase):
    @override_settings(NATPWM_LUP=4, NATPWM_K_TERMS=[2, 3], NATPWM_EDGE_POLICY="periodic")
    def test_default_config_reads_settings(self):
        config = get_default_conversion_config()
        self.assertEqual(config.upsampling_factor, 4)
        self.assertEqual(config.k_terms, 2)
        self.assertIs(config.edge_policy, EdgePolicy.PERIODIC)

    def test_converter_per_algorithm(self):
        config = ConversionConfig()
        self.assertIsInstance(get_converter("combined", config, 44100.0), PolyphaseNaturalConverter)
        self.assertIsInstance(get_converter("baseline", config, 44100.0), TwoStageNaturalConverter)
        self.assertIsInstance(get_converter("algorithm1", config, 44100.0), StirlingNaturalConverter)

    def test_bank_is_shared_across_k(self):
        first = get_converter("combined", ConversionConfig(k_terms=1), 44100.0)
        second = get_converter("combined", ConversionConfig(k_terms=4), 44100.0)
        self.assertIs(first.bank, second.bank)
        self.assertIsNot(first, second)
        self.assertIs(get_polyphase_bank(44100.0, ConversionConfig(k_terms=1)), first.bank)
