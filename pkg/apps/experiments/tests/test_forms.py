from django.test import SimpleTestCase, override_settings

from apps.core.entities.experiment import Algorithm, EdgePolicy, ToneSpec
from apps.experiments.forms import ExperimentSpecForm


@override_settings(NATPWM_TONE="6600,0.8,1.0", NATPWM_K_TERMS=[4], NATPWM_OUTPUT_DIR="/tmp/natpwm")
class ExperimentSpecFormTests(SimpleTestCase):
    def test_defaults_come_from_settings(self):
        form = ExperimentSpecForm({}, command="run_convert")
        self.assertTrue(form.is_valid(), form.errors)
        spec = form.to_spec()
        self.assertEqual(spec.tone, ToneSpec(6600.0, 0.8, 1.0))
        self.assertEqual(spec.k_values, (4,))
        self.assertIs(spec.algorithm, Algorithm.COMBINED)
        self.assertEqual(spec.output_dir, "/tmp/natpwm")
        self.assertFalse(spec.export_wav)

    def test_sweep_defaults(self):
        spec = ExperimentSpecForm({}, command="run_fig5").to_spec()
        self.assertEqual(spec.k_values, (1, 2, 3, 4))
        self.assertIs(spec.conversion.edge_policy, EdgePolicy.PERIODIC)

    def test_flags_override_defaults(self):
        data = {"k_terms": "2,3", "lup": 4, "bits": 8, "wav": True, "tone": "1000,0.5,0.01", "edge_policy": None}
        spec = ExperimentSpecForm(data).to_spec()
        self.assertEqual(spec.k_values, (2, 3))
        self.assertEqual(spec.conversion.upsampling_factor, 4)
        self.assertEqual(spec.conversion.k_terms, 2)
        self.assertEqual(spec.bits, 8)
        self.assertTrue(spec.export_wav)
        self.assertIs(spec.conversion.edge_policy, EdgePolicy.ZERO)

    def test_input_file_replaces_the_default_tone(self):
        spec = ExperimentSpecForm({"input": "samples.csv"}).to_spec()
        self.assertIsNone(spec.tone)
        self.assertEqual(spec.input_path, "samples.csv")

    def test_errors_name_the_flag(self):
        cases = {
            "k_terms": ("1,x", "--k-terms"),
            "lup": (1, "--lup"),
            "tone": ("6600,1.5,1", "--tone"),
            "bits": (20, "--bits"),
        }
        for field, (value, label) in cases.items():
            form = ExperimentSpecForm({field: value})
            self.assertFalse(form.is_valid(), field)
            self.assertIn(label, form.error_message())

    def test_cross_field_errors(self):
        form = ExperimentSpecForm({"tone": "1000,0.5,0.01", "input": "samples.csv"})
        self.assertFalse(form.is_valid())
        self.assertIn("form:", form.error_message())
        form = ExperimentSpecForm({"k_terms": "5"})
        self.assertFalse(form.is_valid())
        self.assertIn("K must be in 1..4", form.error_message())
        with self.assertRaises(ValueError):
            form.to_spec()
