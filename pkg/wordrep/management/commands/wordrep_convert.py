from django.core.management.base import BaseCommand

from wordrep import cli
from wordrep.codecs import format_dot, format_edge_list, format_graph6, format_graphml

WRITERS = {
    "graph6": lambda G: format_graph6(G) + "\n",
    "edges": format_edge_list,
    "dot": format_dot,
    "graphml": format_graphml,
}


class Command(BaseCommand):
    help = "Convert a graph between edge-list, graph6, DOT and GraphML text"

    def add_arguments(self, parser):
        cli.add_graph_argument(parser)
        parser.add_argument("--to", choices=sorted(WRITERS), default="graph6")
        parser.add_argument("--output", help="Write here instead of standard output.")

    def handle(self, *args, **options):
        G, _ = cli.read_graph(options["graph"], options["format"])
        text = WRITERS[options["to"]](G)
        if options["output"]:
            cli.write_text(options["output"], text)
        else:
            self.stdout.write(text, ending="")
