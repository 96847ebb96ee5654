import os
from pathlib import Path

from django.conf import settings

DEFAULT_ASSETS = Path(__file__).resolve().parent / "data"

ASSETS = os.environ.get("WORDREP_ASSETS") or getattr(settings, "WORDREP_ASSETS", None) or DEFAULT_ASSETS
THREADS = getattr(settings, "WORDREP_THREADS", None)
DETERMINISTIC = getattr(settings, "WORDREP_DETERMINISTIC", False)
CYCLE_LENGTH = getattr(settings, "WORDREP_CYCLE_LENGTH", 6)
SWEEP_CYCLE_LENGTH = getattr(settings, "WORDREP_SWEEP_CYCLE_LENGTH", 4)
MAX_SIZE = getattr(settings, "WORDREP_MAX_SIZE", 12)
RECORD_RUNS = getattr(settings, "WORDREP_RECORD_RUNS", False)
