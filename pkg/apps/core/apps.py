from django.apps import AppConfig


class CoreConfig(AppConfig):
    """
    Domain layer: signal entities, DSP services and artifact repositories.
    """
    name = "apps.core"
    label = "core"
    verbose_name = "Natural-sampling core"
