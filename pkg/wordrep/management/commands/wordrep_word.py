from django.core.management.base import BaseCommand, CommandError

from wordrep import cli
from wordrep.exceptions import WordrepError
from wordrep.reports import RunReport
from wordrep.words import find_uniform_word, format_word, parse_word, represents_with_reason


class Command(BaseCommand):
    help = "Check that a word represents a graph, or search for a uniform one"

    def add_arguments(self, parser):
        cli.add_graph_argument(parser)
        parser.add_argument("word", nargs="?", help='A word such as "1123(10)".')
        parser.add_argument("--find", type=int, metavar="K", help="Search k-uniform words for k up to K.")
        cli.add_common_arguments(parser)

    def handle(self, *args, **options):
        G, name = cli.read_graph(options["graph"], options["format"])
        if options["word"] is None and options["find"] is None:
            raise CommandError("Give a word or --find K.", returncode=2)
        report = RunReport(f"wordrep word {name}", deterministic=options["deterministic"])
        try:
            if options["word"] is not None:
                w = parse_word(options["word"])
                ok, reason = represents_with_reason(w, G)
                report.add("represents", f"{format_word(w)} represents {name}", ok, reason or "")
            if options["find"] is not None:
                w = find_uniform_word(G, options["find"])
                if w is None:
                    detail = f"no k-uniform word for k <= {options['find']}; this does not rule out longer words"
                    report.add("uniform-word", "uniform representing word", False, detail)
                else:
                    report.add("uniform-word", "uniform representing word", True, format_word(w), word=format_word(w))
        except WordrepError as e:
            raise CommandError(str(e), returncode=2) from e
        cli.emit(self, report, options)
