"""K_m-K_n graphs: two cliques, the K_m maximal.

H_m is the most general member for a given m: a K_m on 1..m and one vertex per
proper subset of it, adjacent to exactly that subset, all those vertices forming
a clique. Every K_m-K_n graph twin-reduces to an induced subgraph of H_m, so
questions about the whole class reduce to sweeps over the subsets of H_m.

Sweeps work on index bitmasks of the host graph. Representability verdicts go
through a ``Decider``, which twin-reduces, caches by canonical form and farms
batches out to worker processes.
"""
import logging
import os
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from joblib import Parallel, delayed
from tqdm import tqdm

from . import assets, settings
from .exceptions import FormatError, WordrepError
from .graphs import (
    CanonicalCode,
    Graph,
    bits,
    build_graph,
    canonical_form,
    contains_induced,
    delete_vertices,
    induced_mask,
    induced_subgraph,
    is_isomorphic,
    is_three_colourable,
    twin_reduce,
    wheel_graph,
)
from .orientation import PartialOrientation, SearchOptions, search_semi_transitive
from .words import Word, format_word, represents

logger = logging.getLogger(__name__)

MAX_M = 4
FORBIDDEN = ("B1", "B2", "B3", "B4", "B5", "B6", "B7")
PATTERNS = FORBIDDEN + ("A3",)
CASE_LABELS = range(5, 20)
RANGE_RE = re.compile(r"^(\d+)(?:--(\d+))?$")


@dataclass(frozen=True)
class FamilyGraph:
    graph: Graph
    m_side: Tuple[int, ...]
    n_side: Tuple[int, ...]
    name: str = ""

    def __str__(self):
        return self.name or f"K{len(self.m_side)}-K{len(self.n_side)}"


Host = Union[FamilyGraph, Graph]


def _host(F: Host) -> Graph:
    return F.graph if isinstance(F, FamilyGraph) else F


def _proper_subsets(m: int) -> List[Tuple[int, ...]]:
    """Proper subsets of 1..m by size, then lexicographically; the empty set first."""
    return [s for size in range(m) for s in combinations(range(1, m + 1), size)]


def build_general(m: int, copies: int = 1) -> FamilyGraph:
    """H_m with every K_n vertex repeated `copies` times."""
    if not 1 <= m <= MAX_M:
        raise WordrepError(f"m must be between 1 and {MAX_M}, got {m}.")
    if copies < 1:
        raise WordrepError(f"copies must be positive, got {copies}.")
    subsets = [s for s in _proper_subsets(m) for _ in range(copies)]
    n = m + len(subsets)
    m_side = tuple(range(1, m + 1))
    n_side = tuple(range(m + 1, n + 1))
    edges = list(combinations(m_side, 2)) + list(combinations(n_side, 2))
    for v, subset in zip(n_side, subsets):
        edges += [(u, v) for u in subset]
    name = f"H{m}" if copies == 1 else f"H{m}x{copies}"
    return FamilyGraph(build_graph(n, edges), m_side, n_side, name)


def build_H(m: int) -> FamilyGraph:
    return build_general(m)


def validate_km_kn(F: FamilyGraph) -> bool:
    G = F.graph
    if sorted(F.m_side + F.n_side) != sorted(G.labels):
        return False
    if not (G.is_clique(F.m_side) and G.is_clique(F.n_side)):
        return False
    m_mask = G.mask_of(F.m_side)
    return all(G.adj[G.index(v)] & m_mask != m_mask for v in F.n_side)


def build_paper_graph(name: str) -> Graph:
    return assets.load_graph_asset(name)[0]


def paper_orientation(name: str) -> PartialOrientation:
    return assets.load_orientation_asset(name, build_paper_graph(name))


def family_graph(name: str) -> FamilyGraph:
    """A bundled graph with its clique sides."""
    G, metadata = assets.load_graph_asset(name)
    if "sides" not in metadata:
        raise WordrepError(f"Graph {name} is not bundled with clique sides.")
    m_side, n_side = assets.parse_sides(metadata["sides"])
    return FamilyGraph(G, m_side, n_side, name)


def forbidden_patterns(names: Sequence[str] = FORBIDDEN) -> Dict[str, Graph]:
    return {name: build_paper_graph(name) for name in names}


def k1_kn(n: int) -> Graph:
    """Vertex 1 isolated, a clique on 2..n+1."""
    return build_graph(n + 1, list(combinations(range(2, n + 2), 2)))


def k1_kn_word(n: int) -> Word:
    return (1,) + tuple(range(1, n + 2))


def _decide(adj, labels, max_cycle_length) -> bool:
    G = Graph(adj, labels)
    return search_semi_transitive(G, SearchOptions(max_cycle_length=max_cycle_length)).representable


def _decide_job(job) -> bool:
    return _decide(*job)


class Decider:
    """Representability with twin reduction and a cache keyed by canonical form."""

    def __init__(self, max_cycle_length: Optional[int] = None, threads: Optional[int] = 1, progress: bool = False):
        self.max_cycle_length = max_cycle_length or settings.SWEEP_CYCLE_LENGTH
        self.threads = threads or os.cpu_count() or 1
        self.progress = progress
        self.cache: Dict[CanonicalCode, bool] = {}
        self.searches = 0

    def _reduce(self, G: Graph) -> Tuple[CanonicalCode, Graph]:
        reduced, _ = twin_reduce(G)
        return canonical_form(reduced), reduced

    def __call__(self, G: Graph) -> bool:
        code, reduced = self._reduce(G)
        if code not in self.cache:
            self.cache[code] = _decide(reduced.adj, reduced.labels, self.max_cycle_length)
            self.searches += 1
        return self.cache[code]

    def decide_many(self, graphs: Sequence[Graph], desc: Optional[str] = None) -> List[bool]:
        keyed = [self._reduce(G) for G in graphs]
        todo: Dict[CanonicalCode, Graph] = {}
        for code, reduced in keyed:
            if code not in self.cache and code not in todo:
                todo[code] = reduced
        if todo:
            self._fill(todo, desc)
        return [self.cache[code] for code, _ in keyed]

    def _fill(self, todo: Dict[CanonicalCode, Graph], desc: Optional[str]):
        codes = list(todo)
        jobs = [(todo[code].adj, todo[code].labels, self.max_cycle_length) for code in codes]
        with tqdm(total=len(jobs), desc=desc, disable=not self.progress, leave=False) as bar:
            if self.threads > 1 and len(jobs) > 1:
                batch_size = max(1, len(jobs) // (self.threads * 8))
                parallel = Parallel(n_jobs=self.threads, batch_size=batch_size, return_as="generator")
                for code, verdict in zip(codes, parallel(delayed(_decide_job)(job) for job in jobs)):
                    self.cache[code] = verdict
                    bar.update()
            else:
                for code, job in zip(codes, jobs):
                    self.cache[code] = _decide_job(job)
                    bar.update()
        self.searches += len(jobs)
        logger.debug(f"decided classes={len(jobs)} cached={len(self.cache)} threads={self.threads}")


def _subsets(n: int, k: int) -> Iterator[int]:
    for combo in combinations(range(n), k):
        mask = 0
        for i in combo:
            mask |= 1 << i
        yield mask


def _twin(adj: Sequence[int], mask: int) -> int:
    """Index of the later vertex of some twin pair inside mask, or -1."""
    members = list(bits(mask))
    for a, u in enumerate(members):
        for v in members[a + 1 :]:
            if (adj[u] ^ adj[v]) & mask & ~(1 << u | 1 << v) == 0:
                return v
    return -1


def enumerate_minimal_non_wr(
    F: Host, max_size: int, decider: Optional[Decider] = None
) -> Dict[CanonicalCode, Tuple[int, ...]]:
    """Minimal non-representable induced subgraphs with at most max_size vertices.

    Keyed by isomorphism class; each value is the first vertex set found for it.
    Runs upwards by size: a set with a non-representable one-vertex deletion is
    non-representable and not minimal, and a set with twins has the verdict of
    the set without one of them.
    """
    G = _host(F)
    decider = decider or Decider()
    max_size = min(max_size, G.n)
    found: Dict[CanonicalCode, Tuple[int, ...]] = {}
    blocked: set = set()
    for k in range(1, max_size + 1):
        current = set()
        undecided = []
        for mask in _subsets(G.n, k):
            if any(mask & ~(1 << i) in blocked for i in bits(mask)):
                current.add(mask)
            elif _twin(G.adj, mask) < 0:
                undecided.append(mask)
        graphs = [induced_mask(G, mask) for mask in undecided]
        for mask, sub, representable in zip(undecided, graphs, decider.decide_many(graphs, desc=f"{G} size {k}")):
            if not representable:
                current.add(mask)
                found.setdefault(canonical_form(sub), sub.labels)
        logger.debug(f"{G} size={k} undecided={len(undecided)} non_representable={len(current)}")
        blocked = current
    logger.info(f"{G} max_size={max_size} minimal non-representable classes={len(found)}")
    return found


class Counterexample(NamedTuple):
    vertices: Tuple[int, ...]
    representable: bool
    contains_forbidden: bool


@dataclass
class CharacterizationReport:
    host: str
    max_size: int
    subsets: int = 0
    forbidden_free: int = 0
    counterexamples: List[Counterexample] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.counterexamples


def check_characterization(
    F: Host, forbidden: Iterable[Graph], max_size: int, decider: Optional[Decider] = None
) -> CharacterizationReport:
    """Check representable <=> forbidden-free on every induced subgraph of at most max_size vertices.

    Containment is computed upwards by size. Forbidden-free sets are then swept
    downwards: a representable set marks its one-vertex deletions representable,
    every other free set is decided. One counterexample is kept per class.
    """
    G = _host(F)
    decider = decider or Decider()
    max_size = min(max_size, G.n)
    patterns = {canonical_form(P): P for P in forbidden}
    sizes = {code.n for code in patterns}
    pattern_representable = {code: decider(P) for code, P in patterns.items()}
    report = CharacterizationReport(str(F), max_size)
    seen: set = set()

    def record(mask: int, representable: bool, contains: bool):
        sub = induced_mask(G, mask)
        code = canonical_form(sub)
        if code not in seen:
            seen.add(code)
            report.counterexamples.append(Counterexample(sub.labels, representable, contains))

    levels: List[List[int]] = [[]]
    containing_below: set = set()
    for k in range(1, max_size + 1):
        free, containing = [], set()
        for mask in _subsets(G.n, k):
            report.subsets += 1
            if any(mask & ~(1 << i) in containing_below for i in bits(mask)):
                containing.add(mask)
                continue
            if k in sizes:
                code = canonical_form(induced_mask(G, mask))
                if code in patterns:
                    containing.add(mask)
                    if pattern_representable[code]:
                        record(mask, True, True)
                    continue
            free.append(mask)
        levels.append(free)
        report.forbidden_free += len(free)
        containing_below = containing
        logger.debug(f"{G} size={k} free={len(free)} containing={len(containing)}")

    marked: set = set()
    for k in range(max_size, 0, -1):
        pending = [mask for mask in levels[k] if mask not in marked]
        verdicts = dict(
            zip(pending, decider.decide_many([induced_mask(G, mask) for mask in pending], desc=f"{G} size {k}"))
        )
        below = set()
        for mask in levels[k]:
            if mask in marked or verdicts[mask]:
                below.update(mask & ~(1 << i) for i in bits(mask))
            else:
                record(mask, False, False)
        marked = below
    logger.info(
        f"{G} max_size={max_size} subsets={report.subsets} free={report.forbidden_free} "
        f"counterexamples={len(report.counterexamples)}"
    )
    return report


def parse_deletion_spec(text: str) -> frozenset:
    """Read "5--8.10--14.16": dot-separated labels, "x--y" for the run x..y."""
    deleted = []
    previous = 0
    for token in text.strip().split("."):
        match = RANGE_RE.match(token.strip())
        if not match:
            raise FormatError(f"Malformed token {token!r} in deletion spec {text!r}.")
        start = int(match.group(1))
        end = int(match.group(2)) if match.group(2) else start
        if match.group(2) and end <= start:
            raise FormatError(f"Empty range {token!r} in deletion spec {text!r}.")
        for label in (start, end):
            if label not in CASE_LABELS:
                raise FormatError(f"Label {label} in deletion spec {text!r} is outside 5..19.")
        if start <= previous:
            raise FormatError(f"Deletion spec {text!r} is not increasing at {token!r}.")
        deleted.extend(range(start, end + 1))
        previous = end
    return frozenset(deleted)


@dataclass(frozen=True)
class DeletionCase:
    spec: str
    deleted: frozenset
    pattern: str
    witness: Tuple[int, ...]
    line: Optional[int] = None

    def __str__(self):
        where = f"line {self.line}: " if self.line else ""
        return f"{where}{self.spec} ; {self.pattern} ; {','.join(map(str, self.witness))}"


def parse_case_line(text: str, line: Optional[int] = None) -> DeletionCase:
    """Read "SPEC ; PATTERN ; v1,v2,..."."""
    parts = [part.strip() for part in text.split(";")]
    if len(parts) != 3:
        raise FormatError(f"Case {text!r} does not have the form 'SPEC ; PATTERN ; v1,v2,...'.")
    spec, pattern, witness = parts
    if pattern not in PATTERNS:
        raise FormatError(f"Case {text!r} names unknown pattern {pattern!r}.")
    try:
        vertices = tuple(int(v) for v in witness.split(","))
    except ValueError:
        raise FormatError(f"Case {text!r} has a malformed witness list.") from None
    if any(not 1 <= v <= 19 for v in vertices):
        raise FormatError(f"Case {text!r} cites a vertex outside 1..19.")
    return DeletionCase(spec, parse_deletion_spec(spec), pattern, vertices, line)


def load_cases() -> List[DeletionCase]:
    return [parse_case_line(text, number) for number, text in assets.load_case_lines()]


@dataclass
class CaseReport:
    case: DeletionCase
    contains_some_forbidden: bool
    cited_witness_valid: bool
    found_pattern: Optional[str] = None
    found_vertices: Tuple[int, ...] = ()
    maximal: Optional[bool] = None
    discrepancy_note: str = ""


def verify_case(
    C: Host,
    case: DeletionCase,
    patterns: Optional[Dict[str, Graph]] = None,
    check_maximal: bool = False,
    decider: Optional[Decider] = None,
) -> CaseReport:
    """Check one deletion case of graph C.

    The residual graph must contain one of the forbidden patterns; whether the
    cited vertex set realises the cited pattern is reported separately. With
    check_maximal, every further deletion of a label above the last deleted
    one must leave a representable graph.
    """
    G = _host(C)
    patterns = patterns or forbidden_patterns()
    residual = delete_vertices(G, case.deleted)
    notes = []

    order = sorted(patterns, key=lambda name: name != case.pattern)
    found_pattern, found_vertices = None, ()
    for name in order:
        if name not in FORBIDDEN:
            continue
        embedding = contains_induced(residual, patterns[name])
        if embedding is not None:
            found_pattern, found_vertices = name, tuple(sorted(embedding.image()))
            break
    if found_pattern is None:
        notes.append("no forbidden pattern in the residual graph")

    pattern = patterns.get(case.pattern) or build_paper_graph(case.pattern)
    stale = sorted(set(case.witness) & case.deleted)
    if stale:
        valid = False
        notes.append(f"witness cites deleted vertices {stale}")
    elif len(set(case.witness)) != pattern.n:
        valid = False
        notes.append(f"witness has {len(set(case.witness))} vertices, {case.pattern} has {pattern.n}")
    else:
        valid = is_isomorphic(induced_subgraph(residual, case.witness), pattern)
        if not valid:
            notes.append(f"witness does not induce {case.pattern}")

    maximal = None
    if check_maximal:
        decider = decider or Decider()
        last = max(case.deleted)
        offending = [
            v for v in residual.labels if v > last and not decider(delete_vertices(residual, [v]))
        ]
        maximal = not offending
        if offending:
            notes.append(f"deleting {offending} still leaves a non-representable graph")

    return CaseReport(case, found_pattern is not None, valid, found_pattern, found_vertices, maximal, "; ".join(notes))


class Check(NamedTuple):
    description: str
    holds: bool


def claim_small_m(max_n: int = 8, decider: Optional[Decider] = None) -> List[Check]:
    """Every K_1-K_n and K_2-K_n graph is representable."""
    decider = decider or Decider()
    checks = []
    for m in (1, 2):
        H = build_H(m).graph
        checks.append(Check(f"H{m} is 3-colourable", is_three_colourable(H)))
        checks.append(Check(f"H{m} is representable", decider(H)))
    reduced, _ = twin_reduce(build_general(2, copies=3).graph)
    checks.append(Check("the general K2-Kn graph twin-reduces to H2", is_isomorphic(reduced, build_H(2).graph)))
    for n in range(1, max_n + 1):
        word = k1_kn_word(n)
        checks.append(Check(f"{format_word(word)} represents K1-K{n}", represents(word, k1_kn(n))))
    return checks


def _same(G: Graph, H: Graph) -> bool:
    return set(G.labels) == set(H.labels) and G.edges() == H.edges()


def removal_reductions() -> List[Check]:
    """What is left of H3 after removing each kind of vertex."""
    H3 = build_paper_graph("H3")
    A = {name: build_paper_graph(name) for name in ("A1", "A2", "A3", "A4", "A5")}
    reduced, removed = twin_reduce(delete_vertices(H3, [1]))
    twins = sorted(r for _, r in removed)
    return [
        Check("H3 - 1 twin-reduces to A1 by removing 5, 8, 9", _same(reduced, A["A1"]) and twins == [5, 8, 9]),
        Check("H3 - 4 is A2", _same(delete_vertices(H3, [4]), A["A2"])),
        Check("H3 - 5 contains A3", contains_induced(delete_vertices(H3, [5]), A["A3"]) is not None),
        Check("H3 - {5, 10} is A4", _same(delete_vertices(H3, [5, 10]), A["A4"])),
        Check("H3 - 8 is A5", _same(delete_vertices(H3, [8]), A["A5"])),
        Check(
            "H3 - {5, 8} is an induced subgraph of A5",
            contains_induced(A["A5"], delete_vertices(H3, [5, 8])) is not None,
        ),
    ]


CASE_WITNESSES = [
    ("10", "B7", (1, 2, 3, 4, 5, 11, 12, 13, 14)),
    ("10--17", "B2", (2, 3, 4, 7, 8, 9, 19)),
    ("10--14.16--18", "B2", (2, 3, 4, 7, 8, 9, 19)),
    ("10--13.16--18", "B2", (2, 3, 4, 7, 8, 9, 19)),
    ("10.11.13.14.16--18", "B2", (2, 3, 4, 7, 8, 9, 19)),
    ("10.11.14--18", "B2", (2, 3, 4, 7, 8, 9, 19)),
    ("10.11.14.16--18", "B2", (2, 3, 4, 7, 8, 9, 19)),
    ("16", "B1", (1, 2, 3, 4, 10, 11, 13)),
]


def case_witnesses(patterns: Optional[Dict[str, Graph]] = None) -> List[CaseReport]:
    """The witnesses for graph C once vertex 5 and vertex 6 are kept."""
    C = build_paper_graph("C")
    patterns = patterns or forbidden_patterns()
    return [
        verify_case(C, DeletionCase(spec, parse_deletion_spec(spec), pattern, witness), patterns)
        for spec, pattern, witness in CASE_WITNESSES
    ]


@dataclass
class MinimalityReport:
    name: str
    non_representable: bool
    failing_deletions: List[int] = field(default_factory=list)
    w5_deletions: List[int] = field(default_factory=list)

    @property
    def minimal(self) -> bool:
        return self.non_representable and not self.failing_deletions


def check_minimality(G: Graph, name: str = "", decider: Optional[Decider] = None) -> MinimalityReport:
    """Non-representable, with every one-vertex deletion representable."""
    decider = decider or Decider()
    W5 = wheel_graph()
    report = MinimalityReport(name or str(G), not decider(G))
    for v in G.labels:
        rest = delete_vertices(G, [v])
        if not decider(rest):
            report.failing_deletions.append(v)
        if rest.n == W5.n and is_isomorphic(rest, W5):
            report.w5_deletions.append(v)
    return report
