import logging
import traceback

from . import claims, models, settings

try:
    from celery.utils.log import get_task_logger

    logger = get_task_logger(__name__)
except ImportError:
    logger = logging.getLogger(__name__)


def process_claim_result(result_id):
    """Run the claim a ClaimResult names and store its verdict on it."""
    logger.info(f"ClaimResult.id={result_id} process_claim_result task started")
    result = models.ClaimResult.objects.get(pk=result_id)
    try:
        result.status = models.VerificationRun.Status.PENDING
        result.save()

        claim = claims.REGISTRY.get(result.key)
        if claim is None:
            raise KeyError(f"No claim is registered as {result.key!r}.")
        ctx = claims.ClaimContext(
            threads=settings.THREADS or 1,
            max_size=settings.MAX_SIZE,
            deterministic=settings.DETERMINISTIC,
        )
        item = claims.run_claim(claim, ctx)
        result.title = item.title
        result.status = item.status
        result.detail = item.detail
        result.elapsed_ms = item.elapsed_ms
    except Exception:
        logger.exception(f"ClaimResult.id={result.id} in error state")
        result.status = models.VerificationRun.Status.ERROR
        result.note = traceback.format_exc()
    finally:
        logger.debug(f"ClaimResult.id={result.id} Saving ClaimResult")
        result.save()


try:
    from celery import shared_task

    process_claim_result = shared_task(process_claim_result)
except ImportError:
    pass
