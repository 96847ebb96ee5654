from django.core.management.base import BaseCommand, CommandError

from wordrep import cli, settings
from wordrep.codecs import format_dot, parse_orientation
from wordrep.exceptions import WordrepError
from wordrep.orientation import find_shortcut, is_acyclic, propagate
from wordrep.proof import ARROW
from wordrep.reports import RunReport
from wordrep.words import format_word


def _arrow(arcs):
    return " ".join(f"{format_word([u])}{ARROW}{format_word([v])}" for u, v in arcs)


class Command(BaseCommand):
    help = "Check an orientation for semi-transitivity, or propagate a partial one"

    def add_arguments(self, parser):
        cli.add_graph_argument(parser)
        parser.add_argument("orientation", help='File of "u>v" lines.')
        parser.add_argument("--propagate", action="store_true", help="Close a partial orientation under the forcing rules.")
        parser.add_argument("--dot", help="Write the (propagated) orientation as a DOT digraph here.")
        cli.add_common_arguments(parser)

    def handle(self, *args, **options):
        G, name = cli.read_graph(options["graph"], options["format"])
        report = RunReport(f"wordrep orient {name}", deterministic=options["deterministic"])
        try:
            P = parse_orientation(G, cli.read_text(options["orientation"]))
            if options["propagate"]:
                result = propagate(P, settings.CYCLE_LENGTH)
                P = result.orientation
                lines = [f"O{_arrow(step.arcs)} (C{format_word(step.cycle)})" for step in result.steps]
                conflict = result.conflict
                if conflict is not None:
                    if conflict.kind == "shortcut":
                        lines.append(f"shortcut {format_word(conflict.witness.path)}")
                    else:
                        lines.append(f"directed cycle {format_word(conflict.cycle)}")
                report.add("propagate", f"{len(result.steps)} forcing steps", conflict is None, "\n".join(lines))
            else:
                if not P.is_complete():
                    raise CommandError(
                        f"{len(P.unoriented())} edges are unoriented; use --propagate for partial orientations.",
                        returncode=2,
                    )
                if not is_acyclic(P):
                    report.add("semi-transitive", "semi-transitive", False, "the orientation has a directed cycle")
                else:
                    witness = find_shortcut(P)
                    if witness is None:
                        report.add("semi-transitive", "semi-transitive", True)
                    else:
                        u, v = witness.missing_pair
                        detail = f"shortcut {format_word(witness.path)}: {u} and {v} are not adjacent"
                        report.add("semi-transitive", "semi-transitive", False, detail)
        except WordrepError as e:
            raise CommandError(str(e), returncode=2) from e
        if options["dot"]:
            cli.write_text(options["dot"], format_dot(G, P))
        cli.emit(self, report, options)
