"""
python manage.py run_convert --tone 6600,0.8,1.0 --k-terms 4 --out runs/convert
"""

from __future__ import annotations

import json

from django.core.management.base import BaseCommand

from apps.core.di.container import get_experiment_service
from apps.experiments.cli import (
    EXIT_USAGE,
    add_experiment_arguments,
    domain_failure,
    fail,
    flag_data,
)
from apps.experiments.forms import ExperimentSpecForm


class Command(BaseCommand):
    help = "Convert a tone or an input file to natural samples and write them with a manifest."

    def add_arguments(self, parser):
        add_experiment_arguments(parser)

    def handle(self, *args, **options):
        form = ExperimentSpecForm(flag_data(options), command="run_convert")
        if not form.is_valid():
            raise fail(self.stderr, "ValidationError", form.error_message(), EXIT_USAGE)
        spec = form.to_spec()
        try:
            manifest = get_experiment_service().run_convert(spec)
        except (ValueError, OSError) as exc:
            raise domain_failure(self.stderr, exc) from exc
        self.stdout.write(json.dumps(
            {"output_dir": spec.output_dir, "checksums": manifest["checksums"]}, sort_keys=True
        ))
