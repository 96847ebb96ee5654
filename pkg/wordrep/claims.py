"""The reproduction suite: every result about K_m-K_n graphs as a named, re-runnable claim.

A claim is a function taking a ``ClaimContext`` and returning a
``ClaimOutcome``. ``run_claims`` runs a selection into a RunReport; claims
tagged slow are skipped by ``quick`` runs.
"""
import logging
import random
import time
import traceback
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence

from . import assets, settings
from .codecs import format_graph6, parse_graph6
from .exceptions import WordrepError
from .family import (
    Decider,
    build_H,
    build_paper_graph,
    case_witnesses,
    check_characterization,
    check_minimality,
    claim_small_m,
    enumerate_minimal_non_wr,
    family_graph,
    forbidden_patterns,
    load_cases,
    paper_orientation,
    removal_reductions,
    verify_case,
)
from .graphs import (
    Graph,
    build_graph,
    canonical_form,
    enumerate_graphs,
    induced_subgraph,
    is_connected,
    is_isomorphic,
    is_three_colourable,
    twin_reduce,
    wheel_graph,
)
from .orientation import (
    SearchOptions,
    anchored,
    default_anchor,
    exists_semi_transitive_naive,
    is_semi_transitive,
    propagate,
    search_semi_transitive,
    semi_transitive_completions,
)
from .proof import format_transcript, mutate_transcript, parse_transcript, verify_transcript
from .reports import ERROR, FAILED, PASSED, ReportItem, RunReport

logger = logging.getLogger(__name__)

RANDOM_SEED = 20150101
ORACLE_SAMPLES = 200
PROPERTY_SAMPLES = 500
TRANSCRIBED = ("A3", "B1", "B2", "B3", "B4", "B5", "B6", "B7")


class ClaimOutcome(NamedTuple):
    passed: bool
    detail: str = ""
    counterexamples: Sequence[str] = ()


@dataclass
class ClaimContext:
    threads: int = 1
    max_size: int = 12
    deterministic: bool = False
    progress: bool = False
    decider: Optional[Decider] = None

    def __post_init__(self):
        if self.decider is None:
            self.decider = Decider(threads=self.threads, progress=self.progress)


@dataclass(frozen=True)
class Claim:
    key: str
    title: str
    func: Callable[[ClaimContext], ClaimOutcome]
    slow: bool = False


REGISTRY: Dict[str, Claim] = {}


def claim(key: str, title: str, slow: bool = False):
    def register(func):
        REGISTRY[key] = Claim(key, title, func, slow)
        return func

    return register


def _random_graph(rng: random.Random, n: int, density: float = 0.5) -> Graph:
    edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < density]
    return build_graph(n, edges)


def _search(G: Graph) -> bool:
    return search_semi_transitive(G, SearchOptions(max_cycle_length=settings.CYCLE_LENGTH)).representable


def _census(ctx: ClaimContext, n: int, expected: int) -> ClaimOutcome:
    """Count the connected non-representable classes on n vertices."""
    graphs = [G for G in enumerate_graphs(n) if is_connected(G)]
    verdicts = [_search(G) for G in graphs]
    bad = [G for G, representable in zip(graphs, verdicts) if not representable]
    problems = []
    if len(bad) != expected:
        problems.append(f"{len(bad)} non-representable classes, expected {expected}")
    colourable = [format_graph6(G) for G, ok in zip(graphs, verdicts) if not ok and is_three_colourable(G)]
    if colourable:
        problems.append(f"3-colourable but non-representable: {', '.join(colourable)}")
    if n == 6 and bad and not is_isomorphic(bad[0], wheel_graph()):
        problems.append("the non-representable 6-vertex graph is not W5")
    detail = f"{len(graphs)} connected classes on {n} vertices, {len(bad)} non-representable"
    return ClaimOutcome(not problems, "\n".join([detail] + problems), colourable)


@claim("census-6", "W5 is the only non-representable graph on 6 vertices")
def census_6(ctx: ClaimContext) -> ClaimOutcome:
    return _census(ctx, 6, 1)


@claim("census-7", "25 connected non-representable graphs on 7 vertices", slow=True)
def census_7(ctx: ClaimContext) -> ClaimOutcome:
    return _census(ctx, 7, 25)


def _oracle(graphs: Iterable[Graph]) -> ClaimOutcome:
    checked, mismatches = 0, []
    for G in graphs:
        checked += 1
        if _search(G) != exists_semi_transitive_naive(G):
            mismatches.append(format_graph6(G))
    return ClaimOutcome(not mismatches, f"{checked} graphs, {len(mismatches)} mismatches", mismatches)


@claim("oracle-6", "Pruned search agrees with naive enumeration up to 6 vertices")
def oracle_6(ctx: ClaimContext) -> ClaimOutcome:
    return _oracle(G for n in range(1, 7) for G in enumerate_graphs(n))


@claim("oracle-7", "Pruned search agrees with naive enumeration on random 7-vertex graphs", slow=True)
def oracle_7(ctx: ClaimContext) -> ClaimOutcome:
    rng = random.Random(RANDOM_SEED)
    return _oracle(_random_graph(rng, 7) for _ in range(ORACLE_SAMPLES))


@claim("transcripts", "The bundled refutations of A3 and B1-B7 are accepted")
def transcripts(ctx: ClaimContext) -> ClaimOutcome:
    lines, failures = [], []
    for name in TRANSCRIBED:
        verdict = verify_transcript(build_paper_graph(name), assets.load_transcript_asset(name))
        lines.append(f"{name}: {verdict}")
        if not verdict.accepted:
            failures.append(name)
    printed = verify_transcript(build_paper_graph("B3"), assets.load_transcript_asset("B3-printed"))
    lines.append(f"B3 as printed: {printed}")
    return ClaimOutcome(not failures, "\n".join(lines), failures)


@claim("mutations", "Every reversed instruction of a bundled refutation is rejected")
def mutations(ctx: ClaimContext) -> ClaimOutcome:
    flips = swaps = swaps_rejected = 0
    survivors = []
    for name in TRANSCRIBED:
        G = build_paper_graph(name)
        for mutation in mutate_transcript(assets.load_transcript_asset(name)):
            rejected = not verify_transcript(G, mutation.transcript).accepted
            if mutation.kind == "flip":
                flips += 1
                if not rejected:
                    survivors.append(f"{name} {mutation.description}")
            else:
                swaps += 1
                swaps_rejected += rejected
    detail = f"{flips - len(survivors)}/{flips} reversals rejected, {swaps_rejected}/{swaps} vertex exchanges rejected"
    return ClaimOutcome(not survivors, detail, survivors)


@claim("orientations", "The drawn orientations of A1, A2, A4, A5 are semi-transitive")
def orientations(ctx: ClaimContext) -> ClaimOutcome:
    failures = [name for name in assets.ORIENTED_GRAPHS if not is_semi_transitive(paper_orientation(name))]
    return ClaimOutcome(not failures, f"{4 - len(failures)}/4 semi-transitive", failures)


@claim("minimality", "A3 and B1-B7 are minimal non-representable graphs")
def minimality(ctx: ClaimContext) -> ClaimOutcome:
    lines, failures = [], []
    for name in TRANSCRIBED:
        G = build_paper_graph(name)
        report = check_minimality(G, name, ctx.decider)
        if not report.minimal:
            failures.append(name)
            lines.append(f"{name}: non-representable={report.non_representable} failing deletions={report.failing_deletions}")
        if name in ("B1", "B2") and report.w5_deletions:
            failures.append(name)
            lines.append(f"{name}: deleting {report.w5_deletions} leaves W5")
    lines.insert(0, f"{len(TRANSCRIBED) - len(set(failures))}/{len(TRANSCRIBED)} minimal")
    return ClaimOutcome(not failures, "\n".join(lines), failures)


@claim("small-m", "Every K1-Kn and K2-Kn graph is representable")
def small_m(ctx: ClaimContext) -> ClaimOutcome:
    checks = claim_small_m(decider=ctx.decider)
    failures = [check.description for check in checks if not check.holds]
    return ClaimOutcome(not failures, f"{len(checks) - len(failures)}/{len(checks)} checks hold", failures)


@claim("reductions", "Removing a vertex of H3 leaves A1, A2, A4, A5 or a graph containing A3")
def reductions(ctx: ClaimContext) -> ClaimOutcome:
    checks = removal_reductions()
    failures = [check.description for check in checks if not check.holds]
    return ClaimOutcome(not failures, "\n".join(f"{c.description}: {c.holds}" for c in checks), failures)


@claim("minimal-m3", "A3 is the only minimal non-representable subgraph of H3")
def minimal_m3(ctx: ClaimContext) -> ClaimOutcome:
    found = enumerate_minimal_non_wr(build_H(3), 10, ctx.decider)
    expected = {canonical_form(build_paper_graph("A3"))}
    return ClaimOutcome(set(found) == expected, f"{len(found)} minimal classes", [str(v) for v in found.values()])


@claim("characterization-m3", "An induced subgraph of H3 is representable iff it is A3-free")
def characterization_m3(ctx: ClaimContext) -> ClaimOutcome:
    report = check_characterization(build_H(3), [build_paper_graph("A3")], 10, ctx.decider)
    return _characterization_outcome(report)


@claim("minimal-m4", "B1-B7 are the minimal non-representable subgraphs of C up to 9 vertices")
def minimal_m4(ctx: ClaimContext) -> ClaimOutcome:
    found = enumerate_minimal_non_wr(family_graph("C"), 9, ctx.decider)
    expected = {canonical_form(G) for G in forbidden_patterns().values()}
    detail = f"{len(found)} minimal classes, {len(set(found) & expected)} of them among B1-B7"
    return ClaimOutcome(set(found) == expected, detail, [str(found[code]) for code in set(found) - expected])


@claim("characterization-m4", "An induced subgraph of C is representable iff it avoids B1-B7", slow=True)
def characterization_m4(ctx: ClaimContext) -> ClaimOutcome:
    C = family_graph("C")
    report = check_characterization(C, forbidden_patterns().values(), ctx.max_size, ctx.decider)
    outcome = _characterization_outcome(report)
    found = enumerate_minimal_non_wr(C, ctx.max_size, ctx.decider)
    expected = {canonical_form(G) for G in forbidden_patterns().values()}
    if set(found) != expected:
        return ClaimOutcome(False, outcome.detail + f"\n{len(found)} minimal classes up to {ctx.max_size} vertices")
    return outcome


def _characterization_outcome(report) -> ClaimOutcome:
    detail = (
        f"{report.subsets} induced subgraphs up to {report.max_size} vertices, "
        f"{report.forbidden_free} forbidden-free, {len(report.counterexamples)} counterexamples"
    )
    return ClaimOutcome(report.holds, detail, [str(c.vertices) for c in report.counterexamples])


@claim("cases", "Every deletion case of C leaves one of B1-B7")
def cases(ctx: ClaimContext) -> ClaimOutcome:
    C = family_graph("C")
    patterns = forbidden_patterns()
    reports = [verify_case(C, case, patterns) for case in load_cases()]
    missing = [str(r.case) for r in reports if not r.contains_some_forbidden]
    stale = [f"{r.case}: {r.discrepancy_note}" for r in reports if not r.cited_witness_valid]
    detail = (
        f"{len(reports) - len(missing)}/{len(reports)} cases contain a forbidden pattern, "
        f"{len(reports) - len(stale)}/{len(reports)} cited witnesses valid"
    )
    return ClaimOutcome(not missing, "\n".join([detail] + stale), missing)


@claim("case-witnesses", "The witnesses for C with vertices 5 and 6 kept are valid")
def witnesses(ctx: ClaimContext) -> ClaimOutcome:
    reports = case_witnesses()
    failures = [str(r.case) for r in reports if not (r.contains_some_forbidden and r.cited_witness_valid)]
    return ClaimOutcome(not failures, f"{len(reports) - len(failures)}/{len(reports)} witnesses valid", failures)


@claim("properties", "Hereditarity, twin reduction and source fixing hold on sampled graphs")
def properties(ctx: ClaimContext) -> ClaimOutcome:
    rng = random.Random(RANDOM_SEED)
    problems = []
    for _ in range(PROPERTY_SAMPLES):
        G = _random_graph(rng, rng.randint(3, 7))
        representable = _search(G)
        subset = rng.sample(G.labels, rng.randint(1, G.n))
        if representable and not _search(induced_subgraph(G, subset)):
            problems.append(f"hereditarity: {format_graph6(G)} on {sorted(subset)}")
        reduced, _ = twin_reduce(G)
        if _search(reduced) != representable:
            problems.append(f"twin reduction: {format_graph6(G)}")
    for n in range(1, 7):
        for G in enumerate_graphs(n):
            representable = exists_semi_transitive_naive(G)
            for v in G.labels:
                if exists_semi_transitive_naive(G, source=v) != representable:
                    problems.append(f"source fixing: {format_graph6(G)} at {v}")
    return ClaimOutcome(not problems, f"{len(problems)} violations", problems)


@claim("propagation", "Every forced arc is shared by all semi-transitive completions")
def propagation(ctx: ClaimContext) -> ClaimOutcome:
    problems = []
    checked = 0
    for n in range(3, 7):
        for G in enumerate_graphs(n):
            if not G.edge_count:
                continue
            start = anchored(G, default_anchor(G))
            for u, v in start.unoriented():
                for arc in ((u, v), (v, u)):
                    P = start.with_arcs([arc])
                    result = propagate(P, settings.CYCLE_LENGTH)
                    completions = list(semi_transitive_completions(P))
                    checked += 1
                    if result.conflict is not None:
                        if completions:
                            problems.append(f"{format_graph6(G)} {arc}: conflict but completable")
                        continue
                    forced = result.orientation.arcs()
                    if any(not c.has_arc(a, b) for c in completions for a, b in forced):
                        problems.append(f"{format_graph6(G)} {arc}: forced arc missing from a completion")
    return ClaimOutcome(not problems, f"{checked} partial states, {len(problems)} violations", problems)


@claim("round-trips", "graph6 and transcript text survive a parse/format round trip")
def round_trips(ctx: ClaimContext) -> ClaimOutcome:
    problems = []
    for n in range(1, 7):
        for G in enumerate_graphs(n):
            if parse_graph6(format_graph6(G)) != G:
                problems.append(format_graph6(G))
    for name in assets.GRAPH_ORDERS:
        G = build_paper_graph(name).permute(range(assets.GRAPH_ORDERS[name]))
        if parse_graph6(format_graph6(G)) != G:
            problems.append(name)
    for name in assets.TRANSCRIPTS:
        t = assets.load_transcript_asset(name)
        if parse_transcript(format_transcript(t)) != t:
            problems.append(f"transcript {name}")
    return ClaimOutcome(not problems, f"{len(problems)} differences", problems)


def select_claims(only: Optional[Iterable[str]] = None, quick: bool = False) -> List[Claim]:
    if only:
        unknown = sorted(set(only) - set(REGISTRY))
        if unknown:
            raise WordrepError(f"Unknown claims {', '.join(unknown)}; expected some of {', '.join(REGISTRY)}.")
        selected = [REGISTRY[key] for key in REGISTRY if key in set(only)]
    else:
        selected = list(REGISTRY.values())
    if quick:
        selected = [c for c in selected if not c.slow]
    return selected


def run_claim(c: Claim, ctx: ClaimContext) -> ReportItem:
    """Run one claim; library errors and crashes become an item with status error."""
    logger.info(f"Claim.key={c.key} started")
    started = time.monotonic()
    try:
        outcome = c.func(ctx)
        item = ReportItem(c.key, c.title, PASSED if outcome.passed else FAILED, outcome.detail)
        if outcome.counterexamples:
            item.data["counterexamples"] = list(outcome.counterexamples)
    except WordrepError as e:
        logger.warning(f"Claim.key={c.key} could not run: {e}")
        item = ReportItem(c.key, c.title, ERROR, str(e))
    except Exception:
        logger.exception(f"Claim.key={c.key} in error state")
        item = ReportItem(c.key, c.title, ERROR, traceback.format_exc())
    item.elapsed_ms = int((time.monotonic() - started) * 1000)
    logger.info(f"Claim.key={c.key} status={item.status} elapsed_ms={item.elapsed_ms}")
    return item


def run_claims(claims: List[Claim], ctx: ClaimContext, command: str = "wordrep paper") -> RunReport:
    report = RunReport(command, deterministic=ctx.deterministic)
    for c in claims:
        item = run_claim(c, ctx)
        report.items.append(item)
        report.counterexamples += [f"{c.key}: {x}" for x in item.data.get("counterexamples", [])]
    report.finish()
    return report
