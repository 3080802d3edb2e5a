import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

# 294 samples: 44 whole cycles of 6.6 kHz at 44.1 kHz
FIG5_TONE = f"6600,0.8,{294 / 44100.0!r}"


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.root = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def run_command(self, name, *args):
        stdout, stderr = StringIO(), StringIO()
        call_command(name, *args, stdout=stdout, stderr=stderr)
        return stdout.getvalue(), stderr.getvalue()

    def assert_fails(self, name, *args, kind, returncode=2):
        stderr = StringIO()
        with self.assertRaises(CommandError) as ctx:
            call_command(name, *args, stdout=StringIO(), stderr=stderr)
        self.assertEqual(ctx.exception.returncode, returncode)
        error = json.loads(stderr.getvalue().strip())
        self.assertEqual(error["error"], kind)
        return error


class RunConvertCommandTests(CommandTestCase):
    def test_reports_the_written_files(self):
        out = str(self.root / "convert")
        stdout, _ = self.run_command("run_convert", "--tone", "1000,0.5,0.001", "--out", out)
        result = json.loads(stdout)
        self.assertEqual(result["output_dir"], out)
        self.assertIn("converted_K4.csv", result["checksums"])
        self.assertTrue((self.root / "convert" / "manifest.json").exists())

    def test_invalid_flags(self):
        error = self.assert_fails("run_convert", "--k-terms", "7", "--out", str(self.root), kind="ValidationError")
        self.assertIn("K must be in 1..4", error["message"])

    def test_missing_input(self):
        self.assert_fails(
            "run_convert", "--input", str(self.root / "missing.csv"), "--out", str(self.root / "x"),
            kind="InputFormatError",
        )


class RunFig5CommandTests(CommandTestCase):
    def test_prints_the_summary(self):
        out = self.root / "fig5"
        stdout, _ = self.run_command("run_fig5", "--tone", FIG5_TONE, "--out", str(out))
        lines = stdout.splitlines()
        self.assertEqual(lines[0], "K,h2_db,h3_db,thd")
        self.assertEqual(len(lines), 5)
        self.assertEqual(stdout, (out / "summary.csv").read_text())

    def test_harmonic_above_cutoff(self):
        self.assert_fails(
            "run_fig5", "--tone", "9000,0.8,0.01", "--out", str(self.root / "x"), kind="HarmonicRangeError"
        )


class DumpBankCommandTests(CommandTestCase):
    def test_prints_the_table(self):
        stdout, _ = self.run_command("dump_bank")
        lines = stdout.splitlines()
        self.assertEqual(len(lines), 1 + 8 * 4 * 9)
        self.assertTrue(lines[0].startswith("#"))
        self.assertTrue(lines[1].startswith("0 0 0 "))

    def test_writes_files(self):
        self.run_command("dump_bank", "--lup", "4", "--out", str(self.root / "bank"))
        names = sorted(p.name for p in (self.root / "bank").iterdir())
        self.assertEqual(names, ["bank.csv", "bank.txt", "dc_gain.json"])
        self.assertEqual(len((self.root / "bank" / "bank.txt").read_text().splitlines()), 1 + 4 * 4 * 9)

    def test_rejects_bad_rate(self):
        self.assert_fails("dump_bank", "--f1", "-1", kind="ConfigurationError")
