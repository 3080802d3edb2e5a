"""
python manage.py run_fig5 --out runs/fig5

Sweeps K, demodulates the natural PWM of the tone at the cut-off and
tabulates the harmonic levels.
"""

from __future__ import annotations

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
    help = "Harmonic levels of the demodulated natural PWM for each K."

    def add_arguments(self, parser):
        add_experiment_arguments(parser)

    def handle(self, *args, **options):
        form = ExperimentSpecForm(flag_data(options), command="run_fig5")
        if not form.is_valid():
            raise fail(self.stderr, "ValidationError", form.error_message(), EXIT_USAGE)
        spec = form.to_spec()
        service = get_experiment_service()
        try:
            service.run_fig5(spec)
        except (ValueError, OSError) as exc:
            raise domain_failure(self.stderr, exc) from exc
        with open(f"{spec.output_dir}/summary.csv") as handle:
            self.stdout.write(handle.read(), ending="")
