"""
Celery tasks for the K sweep.

Payloads are JSON: the spec travels as ExperimentSpec.to_payload() and
each task re-creates the (deterministic) source itself.
"""

from __future__ import annotations

import logging

from celery import group, shared_task

from apps.core.entities.experiment import ExperimentSpec

logger = logging.getLogger(__name__)


@shared_task(name="experiments.evaluate_k")
def evaluate_k_task(spec_payload: dict, k_terms: int) -> dict:
    from apps.core.di.container import get_experiment_service

    spec = ExperimentSpec.from_payload(spec_payload)
    service = get_experiment_service(parallel=False)
    return service.evaluate_k(spec, service.load_source(spec), k_terms)


def celery_sweep(service, spec: ExperimentSpec, stream) -> list:
    """
    Dispatch one task per K and collect the results in the requested order.

    `service` and `stream` are unused: workers rebuild both from the payload.
    """
    payload = spec.to_payload()
    logger.info("dispatching %d K evaluations", len(spec.k_values))
    job = group(evaluate_k_task.s(payload, k) for k in spec.k_values)
    return job.apply_async().get(disable_sync_subtasks=False)
