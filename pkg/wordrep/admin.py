from django.contrib import admin
from django.shortcuts import redirect

from . import models, tasks


class ClaimResultAdminInline(admin.TabularInline):
    model = models.ClaimResult
    fields = ("key", "title", "status", "elapsed_ms")
    readonly_fields = ("key", "title", "status", "elapsed_ms")
    can_delete = False
    show_change_link = True
    extra = 0

    def has_add_permission(self, request, obj=None):
        return False


@admin.register(models.VerificationRun)
class VerificationRunAdmin(admin.ModelAdmin):
    inlines = [ClaimResultAdminInline]
    list_display = ["__str__", "status", "deterministic", "started_at", "finished_at"]
    list_filter = ["status", "deterministic"]
    search_fields = ["command"]
    ordering = ["-started_at"]
    readonly_fields = ["started_at", "finished_at", "report"]


@admin.register(models.ClaimResult)
class ClaimResultAdmin(admin.ModelAdmin):
    list_select_related = ["run"]
    list_display = ["__str__", "title", "run", "status", "elapsed_ms"]
    list_filter = ["key", "status"]
    search_fields = ["key", "title", "detail"]
    ordering = ["-run__started_at", "id"]
    actions = ["rerun_claim"]

    @admin.action(description="Re-run claim")
    def rerun_claim(self, request, queryset):
        for obj in queryset.all():
            result = models.ClaimResult.objects.create(
                run=obj.run,
                key=obj.key,
                title=obj.title,
                status=models.VerificationRun.Status.NEW,
                note=f"Re-run of claim result pk {obj.id}",
            )
            if hasattr(tasks, "shared_task"):
                tasks.process_claim_result.apply(kwargs={"result_id": result.id})
            else:
                tasks.process_claim_result(result.id)

            self.message_user(request, f"Claim {obj.key} re-run as result {result.id}.")

        return redirect("admin:wordrep_claimresult_changelist")
