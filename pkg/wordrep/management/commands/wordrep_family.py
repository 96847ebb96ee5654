from django.core.management.base import BaseCommand, CommandError

from wordrep import cli, settings
from wordrep.codecs import format_edge_list
from wordrep.exceptions import WordrepError
from wordrep.family import (
    FORBIDDEN,
    MAX_M,
    Decider,
    build_H,
    build_paper_graph,
    check_characterization,
    enumerate_minimal_non_wr,
    family_graph,
    forbidden_patterns,
    load_cases,
    validate_km_kn,
    verify_case,
)
from wordrep.graphs import canonical_form
from wordrep.reports import RunReport

EXPECTED = {1: (), 2: (), 3: ("A3",), 4: FORBIDDEN}


class Command(BaseCommand):
    help = "Build H_m, enumerate its minimal non-representable subgraphs, check the characterization or the deletion cases"

    def add_arguments(self, parser):
        parser.add_argument("action", choices=("build", "enumerate", "characterize", "cases"))
        parser.add_argument("--m", type=int, default=4)
        parser.add_argument("--max-size", type=int, help=f"Largest subgraph inspected (default: {settings.MAX_SIZE}).")
        parser.add_argument("--check-maximal", action="store_true", help="Also check each case is maximal (cases).")
        parser.add_argument("--output", help="Write the built graph here instead of standard output (build).")
        parser.add_argument("--progress", action="store_true", help="Show progress bars on standard error.")
        cli.add_common_arguments(parser)

    def handle(self, *args, **options):
        m = options["m"]
        if not 1 <= m <= MAX_M:
            raise CommandError(f"--m must be between 1 and {MAX_M}, got {m}.", returncode=2)
        action = options["action"]
        H = build_H(m)
        max_size = min(options["max_size"] or settings.MAX_SIZE, H.graph.n)
        decider = Decider(threads=cli.resolve_threads(options), progress=options["progress"])
        report = RunReport(f"wordrep family {action} --m {m}", deterministic=options["deterministic"])
        try:
            if action == "build":
                text = format_edge_list(H.graph, {"name": H.name, "sides": self.sides(H)})
                if options["output"]:
                    cli.write_text(options["output"], text)
                elif not options["json"]:
                    self.stdout.write(text, ending="")
                report.add("valid", f"{H.name} is a K{m}-K{len(H.n_side)} graph", validate_km_kn(H))
            elif action == "enumerate":
                self.enumerate(H, m, max_size, decider, report)
            elif action == "characterize":
                names = EXPECTED[m]
                outcome = check_characterization(H, [build_paper_graph(n) for n in names], max_size, decider)
                avoided = ", ".join(names) or "nothing"
                report.add(
                    "characterization",
                    f"representable iff avoiding {avoided}, up to {max_size} vertices",
                    outcome.holds,
                    f"{outcome.subsets} subsets, {outcome.forbidden_free} forbidden-free",
                )
                report.counterexamples += [str(c.vertices) for c in outcome.counterexamples]
            else:
                self.cases(options, decider, report)
        except WordrepError as e:
            raise CommandError(str(e), returncode=2) from e
        cli.emit(self, report, options)

    def sides(self, F):
        return " ".join(map(str, F.m_side)) + " | " + " ".join(map(str, F.n_side))

    def enumerate(self, H, m, max_size, decider, report):
        expected = {canonical_form(build_paper_graph(name)): name for name in EXPECTED[m]}
        expected = {code: name for code, name in expected.items() if code.n <= max_size}
        found = enumerate_minimal_non_wr(H, max_size, decider)
        for code, vertices in sorted(found.items(), key=lambda item: (item[0].n, item[1])):
            name = expected.get(code, "unexpected")
            report.add(name, f"{code.n} vertices on {list(vertices)}", code in expected, str(code))
        for code, name in expected.items():
            if code not in found:
                report.add(name, "not found", False)

    def cases(self, options, decider, report):
        C = family_graph("C")
        patterns = forbidden_patterns()
        cases = load_cases()
        for case in cases:
            outcome = verify_case(C, case, patterns, options["check_maximal"], decider)
            detail = f"found {outcome.found_pattern} on {list(outcome.found_vertices)}"
            if not outcome.cited_witness_valid or outcome.discrepancy_note:
                detail += f"\ncited witness: {outcome.discrepancy_note}"
            report.add(
                f"line {case.line}",
                f"{case.spec} ; {case.pattern}",
                outcome.contains_some_forbidden,
                detail,
                cited_witness_valid=outcome.cited_witness_valid,
                maximal=outcome.maximal,
            )
