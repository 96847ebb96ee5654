from django.core.management.base import BaseCommand, CommandError

from wordrep import cli, settings
from wordrep.exceptions import WordrepError
from wordrep.orientation import SearchOptions, search_semi_transitive
from wordrep.proof import emit_transcript, format_transcript, mutate_transcript, verify_transcript
from wordrep.reports import RunReport


class Command(BaseCommand):
    help = "Verify, emit or mutate a refutation transcript"

    def add_arguments(self, parser):
        parser.add_argument("action", choices=("verify", "emit", "mutate"))
        cli.add_graph_argument(parser)
        parser.add_argument("transcript", nargs="?", help="Transcript file or paper:NAME (verify, mutate).")
        parser.add_argument("--source", type=int, help="Override the transcript's source vertex.")
        parser.add_argument("--sink", action="store_true", help="Treat the anchor vertex as a sink.")
        parser.add_argument("--output", help="Write the emitted transcript here.")
        cli.add_common_arguments(parser)

    def handle(self, *args, **options):
        G, name = cli.read_graph(options["graph"], options["format"])
        action = options["action"]
        report = RunReport(f"wordrep proof {action} {name}", deterministic=options["deterministic"])
        if action in ("verify", "mutate") and not options["transcript"]:
            raise CommandError(f"proof {action} needs a transcript.", returncode=2)
        sink = True if options["sink"] else None
        try:
            if action == "verify":
                t = cli.read_transcript(options["transcript"])
                verdict = verify_transcript(G, t, source=options["source"], sink=sink)
                detail = "\n".join(
                    f"line {f.line}: {f.instruction}: {f.reason}" if f.line else f"{f.instruction}: {f.reason}"
                    for f in verdict.failures
                )
                report.add("verdict", "accepted" if verdict.accepted else "rejected", verdict.accepted, detail)
            elif action == "emit":
                opts = SearchOptions(
                    source=options["source"],
                    sink=options["sink"],
                    max_cycle_length=settings.CYCLE_LENGTH,
                    threads=cli.resolve_threads(options),
                )
                t = emit_transcript(search_semi_transitive(G, opts))
                text = format_transcript(t)
                verdict = verify_transcript(G, t)
                report.add("emitted", f"{len(t.lines)} lines, {verdict}", verdict.accepted, text.rstrip())
                if options["output"]:
                    cli.write_text(options["output"], text)
            else:
                t = cli.read_transcript(options["transcript"])
                flips, survivors, swaps, swaps_rejected = 0, [], 0, 0
                for mutation in mutate_transcript(t):
                    rejected = not verify_transcript(G, mutation.transcript, source=options["source"], sink=sink).accepted
                    if mutation.kind == "flip":
                        flips += 1
                        if not rejected:
                            survivors.append(mutation.description)
                    else:
                        swaps += 1
                        swaps_rejected += rejected
                report.add(
                    "reversals",
                    f"{flips - len(survivors)}/{flips} reversed instructions rejected",
                    not survivors,
                    "\n".join(survivors),
                )
                report.add("exchanges", f"{swaps_rejected}/{swaps} exchanged cycle vertices rejected", True)
        except WordrepError as e:
            raise CommandError(str(e), returncode=2) from e
        cli.emit(self, report, options)
