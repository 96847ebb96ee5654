import logging

from django.db import models
from django.utils import timezone

logger = logging.getLogger(__name__)


class VerificationRun(models.Model):
    """A recorded run of the paper command or of individual claims"""

    command = models.CharField(max_length=254)
    started_at = models.DateTimeField(default=timezone.now)
    finished_at = models.DateTimeField(null=True, blank=True)
    deterministic = models.BooleanField(default=False)
    report = models.JSONField(
        null=True,
        blank=True,
        help_text="The machine-readable report as the command printed it.",
    )
    note = models.TextField(blank=True)

    class Status(models.TextChoices):
        NEW = "new"
        PENDING = "pending"
        PASSED = "passed"
        FAILED = "failed"
        ERROR = "error"

    status = models.CharField(max_length=127, choices=Status.choices, default=Status.NEW)

    TERMINAL = (Status.PASSED.value, Status.FAILED.value, Status.ERROR.value)

    def sync_status(self):
        """Derive the run's status from its claim results.

        Any error wins over any failure; a run with unfinished results is
        pending, and it is finished once every result is terminal.
        """
        statuses = set(self.results.values_list("status", flat=True))
        if not statuses:
            return
        if statuses - set(self.TERMINAL):
            status = self.Status.PENDING
        elif self.Status.ERROR.value in statuses:
            status = self.Status.ERROR
        elif self.Status.FAILED.value in statuses:
            status = self.Status.FAILED
        else:
            status = self.Status.PASSED
        self.status = status
        if status in self.TERMINAL and self.finished_at is None:
            self.finished_at = timezone.now()
        elif status == self.Status.PENDING:
            self.finished_at = None
        logger.debug(f"VerificationRun.id={self.id} status={self.status}")
        self.save(update_fields=["status", "finished_at"])

    def __str__(self):
        return f"{self.command} ({self.started_at:%Y-%m-%d %H:%M})"


class ClaimResult(models.Model):
    """One claim's verdict within a VerificationRun"""

    run = models.ForeignKey(VerificationRun, on_delete=models.CASCADE, related_name="results")
    key = models.CharField(max_length=127)
    title = models.CharField(max_length=254, blank=True)
    status = models.CharField(
        max_length=127,
        choices=VerificationRun.Status.choices,
        default=VerificationRun.Status.NEW,
    )
    detail = models.TextField(blank=True)
    elapsed_ms = models.PositiveIntegerField(null=True, blank=True)
    note = models.TextField(blank=True, help_text="Traceback of the last crash, or where a re-run came from.")

    class Meta:
        ordering = ["run", "id"]

    def __str__(self):
        return self.key
