from django.core.management.base import BaseCommand, CommandError

from wordrep import cli, services, settings
from wordrep.claims import REGISTRY, ClaimContext, run_claims, select_claims
from wordrep.exceptions import WordrepError


class Command(BaseCommand):
    help = "Re-verify every claim about word-representable K_m-K_n graphs"

    def add_arguments(self, parser):
        parser.add_argument("--quick", action="store_true", help="Skip the claims tagged slow.")
        parser.add_argument("--only", help=f"Comma-separated claim keys: {', '.join(REGISTRY)}.")
        parser.add_argument("--list", action="store_true", help="List the claims and exit.")
        parser.add_argument("--max-size", type=int, default=settings.MAX_SIZE)
        parser.add_argument("--record", action="store_true", default=settings.RECORD_RUNS, help="Save the run to the database.")
        parser.add_argument("--progress", action="store_true")
        cli.add_common_arguments(parser)

    def handle(self, *args, **options):
        only = [key.strip() for key in options["only"].split(",")] if options["only"] else None
        try:
            claims = select_claims(only, options["quick"])
        except WordrepError as e:
            raise CommandError(str(e), returncode=2) from e
        if options["list"]:
            for c in claims:
                self.stdout.write(f"{c.key:<22} {'slow  ' if c.slow else ''}{c.title}")
            return

        ctx = ClaimContext(
            threads=cli.resolve_threads(options),
            max_size=options["max_size"],
            deterministic=options["deterministic"],
            progress=options["progress"],
        )
        command = "wordrep paper" + (" --quick" if options["quick"] else "")
        if only:
            command += f" --only {','.join(only)}"
        report = run_claims(claims, ctx, command)
        if options["record"]:
            run = services.record_report(report)
            self.stderr.write(f"recorded as VerificationRun {run.pk}")
        cli.emit(self, report, options)
