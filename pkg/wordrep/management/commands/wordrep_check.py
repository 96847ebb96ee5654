from django.core.management.base import BaseCommand, CommandError

from wordrep import cli, settings
from wordrep.codecs import format_dot
from wordrep.exceptions import WordrepError
from wordrep.orientation import SearchOptions, find_semi_transitive_naive, search_semi_transitive
from wordrep.proof import emit_transcript, format_transcript
from wordrep.reports import RunReport


class Command(BaseCommand):
    help = "Decide whether a graph is word-representable"

    def add_arguments(self, parser):
        cli.add_graph_argument(parser)
        parser.add_argument("--source", type=int, help="Vertex fixed as a source (default: a vertex of maximum degree).")
        parser.add_argument("--sink", action="store_true", help="Fix the vertex as a sink instead.")
        parser.add_argument("--certificate", help="Write the orientation (DOT) or the refutation transcript here.")
        parser.add_argument("--naive", action="store_true", help="Enumerate every orientation instead of searching.")
        parser.add_argument("--expect", choices=("representable", "non-representable"))
        cli.add_common_arguments(parser)

    def handle(self, *args, **options):
        G, name = cli.read_graph(options["graph"], options["format"])
        source = options["source"]
        if source is not None and source not in G.labels:
            raise CommandError(f"Vertex {source} is not in {name}.", returncode=2)
        report = RunReport(f"wordrep check {name}", deterministic=options["deterministic"])

        try:
            if options["naive"]:
                orientation = find_semi_transitive_naive(G, source)
                if orientation is not None and options["sink"]:
                    orientation = orientation.reversed()
                representable = orientation is not None
                certificate = format_dot(G, orientation) if representable else None
                detail = "exhaustive enumeration"
            else:
                opts = SearchOptions(
                    source=source,
                    sink=options["sink"],
                    max_cycle_length=settings.CYCLE_LENGTH,
                    threads=cli.resolve_threads(options),
                )
                found = search_semi_transitive(G, opts)
                representable = found.representable
                if representable:
                    certificate = format_dot(G, found.orientation)
                    detail = f"semi-transitive orientation with {len(found.orientation.arcs())} arcs"
                else:
                    transcript = emit_transcript(found)
                    certificate = format_transcript(transcript)
                    anchor = "sink" if transcript.sink else "source"
                    detail = f"refutation with {anchor} {transcript.source_vertex}, {len(transcript.lines)} lines"
                    if transcript.extended:
                        detail += " (uses the D: extension)"
        except WordrepError as e:
            raise CommandError(str(e), returncode=2) from e

        verdict = "word-representable" if representable else "non-word-representable"
        expected = options["expect"]
        passed = expected is None or (expected == "representable") == representable
        report.add("verdict", verdict, passed, detail, representable=representable, vertices=G.n, edges=G.edge_count)
        if options["certificate"] and certificate:
            cli.write_text(options["certificate"], certificate)
        cli.emit(self, report, options)
