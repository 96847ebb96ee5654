from django.apps import AppConfig
from django.core.exceptions import ImproperlyConfigured

from . import settings


class WordrepConfig(AppConfig):
    name = "wordrep"
    default_auto_field = "django.db.models.BigAutoField"

    def ready(self):
        import wordrep.signals

        invalid = []
        for setting in ("CYCLE_LENGTH", "SWEEP_CYCLE_LENGTH"):
            value = getattr(settings, setting)
            if not isinstance(value, int) or not 3 <= value <= 6:
                invalid.append(setting)
        if len(invalid) > 0:
            invalid = ", ".join(f"WORDREP_{name}" for name in invalid)
            raise ImproperlyConfigured(f"{invalid} must be an integer between 3 and 6.")
        if settings.THREADS is not None and (
            not isinstance(settings.THREADS, int) or settings.THREADS < 1
        ):
            raise ImproperlyConfigured("WORDREP_THREADS must be None or a positive integer.")
        if not isinstance(settings.MAX_SIZE, int) or not 1 <= settings.MAX_SIZE <= 19:
            raise ImproperlyConfigured("WORDREP_MAX_SIZE must be an integer between 1 and 19.")
