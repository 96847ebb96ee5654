from django.db.models.signals import post_save
from django.dispatch import receiver

from . import models


@receiver(post_save, sender=models.ClaimResult)
def claim_result_post_save_signal(sender, instance, **kwargs):
    """Keep the run's status in step with its results."""
    instance.run.sync_status()
