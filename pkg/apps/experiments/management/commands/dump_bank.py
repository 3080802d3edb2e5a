"""
python manage.py dump_bank [--out DIR]

Prints the polyphase coefficient table, or writes bank.txt, bank.csv and
dc_gain.json when --out is given.
"""

from __future__ import annotations

from django.conf import settings
from django.core.management.base import BaseCommand

from apps.core.di.container import get_default_conversion_config, get_experiment_service, get_polyphase_bank
from apps.core.entities.experiment import ConversionConfig
from apps.core.repositories.file_repository import FileArtifactRepository
from apps.core.services.kernel_design import dump_bank
from apps.experiments.cli import EXIT_USAGE, domain_failure, fail


class Command(BaseCommand):
    help = "Dump the polyphase interpolation / differentiation taps."

    def add_arguments(self, parser):
        parser.add_argument("--f1", type=float)
        parser.add_argument("--lup", type=int)
        parser.add_argument("--half-window", dest="half_window", type=int)
        parser.add_argument("--kernel-support", dest="kernel_support", choices=["corrected", "literal"])
        parser.add_argument("--normalize-dc", dest="normalize_dc", action="store_true")
        parser.add_argument("--out")

    def handle(self, *args, **options):
        defaults = get_default_conversion_config()

        def pick(name, default):
            return default if options[name] is None else options[name]

        try:
            config = ConversionConfig(
                upsampling_factor=pick("lup", defaults.upsampling_factor),
                half_window=pick("half_window", defaults.half_window),
                kernel_support=pick("kernel_support", defaults.kernel_support),
                normalize_dc=options["normalize_dc"] or defaults.normalize_dc,
            )
            rate = pick("f1", settings.NATPWM_F1)
            if rate <= 0:
                raise fail(self.stderr, "ConfigurationError", "--f1 must be positive", EXIT_USAGE)
            bank = get_polyphase_bank(rate, config)
            if options["out"]:
                get_experiment_service().export_bank(bank, FileArtifactRepository(options["out"]))
            else:
                self.stdout.write(dump_bank(bank), ending="")
        except (ValueError, OSError) as exc:
            raise domain_failure(self.stderr, exc) from exc
