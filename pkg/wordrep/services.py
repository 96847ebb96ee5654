import logging

from django.db import transaction

from . import models
from .reports import RunReport

logger = logging.getLogger(__name__)


@transaction.atomic
def record_report(report: RunReport) -> models.VerificationRun:
    """Save a finished report as a VerificationRun with one ClaimResult per item."""
    if report.finished_at is None:
        report.finish()
    run = models.VerificationRun.objects.create(
        command=report.command,
        started_at=report.started_at,
        finished_at=report.finished_at,
        deterministic=report.deterministic,
        report=report.as_dict(),
        status=report.status,
    )
    for item in report.items:
        models.ClaimResult.objects.create(
            run=run,
            key=item.key,
            title=item.title,
            status=item.status,
            detail=item.detail,
            elapsed_ms=item.elapsed_ms,
        )
    run.refresh_from_db()
    logger.info(f"VerificationRun.id={run.id} recorded with {len(report.items)} results, status={run.status}")
    return run
