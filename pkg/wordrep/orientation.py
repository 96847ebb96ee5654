"""Semi-transitive orientations: verification, a naive oracle and the pruned search.

Orientations are stored as one out-neighbour bitmask per vertex index. The
search keeps a reachability closure alongside the partial orientation, so
directed cycles are caught the moment an arc is added and shortcuts are found
with a handful of mask operations per arc.
"""
import logging
import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from .exceptions import GraphError, OrientationError, SearchLimitError
from .graphs import Graph, bits, popcount

logger = logging.getLogger(__name__)

DEFAULT_CYCLE_LENGTH = 6
NAIVE_EDGE_LIMIT = 24
COMPLETION_LIMIT = 20


class PartialOrientation:
    """Per-edge orientation state over a host graph.

    An edge u-v is unoriented, oriented u->v, or oriented v->u.
    """

    __slots__ = ("host", "out")

    def __init__(self, host: Graph, out: Optional[Sequence[int]] = None):
        self.host = host
        self.out = tuple(out) if out is not None else (0,) * host.n

    @classmethod
    def from_arcs(cls, host: Graph, arcs: Iterable[Tuple[int, int]]) -> "PartialOrientation":
        out = [0] * host.n
        for u, v in arcs:
            i, j = host.index(u), host.index(v)
            if not host.adj[i] >> j & 1:
                raise GraphError(f"{u}-{v} is not an edge of {host}.")
            if out[j] >> i & 1:
                raise OrientationError(f"Edge {u}-{v} is oriented both ways.")
            out[i] |= 1 << j
        return cls(host, out)

    def __eq__(self, other):
        if not isinstance(other, PartialOrientation):
            return NotImplemented
        return self.host == other.host and self.out == other.out

    def __hash__(self):
        return hash((self.host, self.out))

    def __repr__(self):
        return f"PartialOrientation({self.host}, arcs={len(self.arcs())})"

    def direction(self, u: int, v: int) -> int:
        """1 if u->v, -1 if v->u, 0 if unoriented."""
        i, j = self.host.index(u), self.host.index(v)
        if not self.host.adj[i] >> j & 1:
            raise GraphError(f"{u}-{v} is not an edge of {self.host}.")
        return _direction(self.out, i, j)

    def has_arc(self, u: int, v: int) -> bool:
        return self.direction(u, v) == 1

    def with_arcs(self, arcs: Iterable[Tuple[int, int]]) -> "PartialOrientation":
        out = list(self.out)
        for u, v in arcs:
            i, j = self.host.index(u), self.host.index(v)
            if not self.host.adj[i] >> j & 1:
                raise GraphError(f"{u}-{v} is not an edge of {self.host}.")
            out[j] &= ~(1 << i)
            out[i] |= 1 << j
        return PartialOrientation(self.host, out)

    def arcs(self) -> List[Tuple[int, int]]:
        labels = self.host.labels
        return sorted((labels[i], labels[j]) for i in range(self.host.n) for j in bits(self.out[i]))

    def unoriented(self) -> List[Tuple[int, int]]:
        labels = self.host.labels
        return sorted(
            tuple(sorted((labels[i], labels[j])))
            for i, j in self.host.edge_indices()
            if not _direction(self.out, i, j)
        )

    def is_complete(self) -> bool:
        return sum(popcount(row) for row in self.out) == self.host.edge_count

    def reversed(self) -> "PartialOrientation":
        out = [0] * self.host.n
        for i in range(self.host.n):
            for j in bits(self.out[i]):
                out[j] |= 1 << i
        return PartialOrientation(self.host, out)


def _direction(out: Sequence[int], i: int, j: int) -> int:
    if out[i] >> j & 1:
        return 1
    if out[j] >> i & 1:
        return -1
    return 0


def anchored(host: Graph, vertex: int, sink: bool = False) -> PartialOrientation:
    """Orient every edge at `vertex` away from it, or towards it for a sink."""
    v = host.index(vertex)
    out = [0] * host.n
    if sink:
        for u in bits(host.adj[v]):
            out[u] |= 1 << v
    else:
        out[v] = host.adj[v]
    return PartialOrientation(host, out)


class ShortcutWitness(NamedTuple):
    path: Tuple[int, ...]
    missing_pair: Tuple[int, int]


def _topological_order(out: Sequence[int]) -> Optional[List[int]]:
    n = len(out)
    indegree = [0] * n
    for i in range(n):
        for j in bits(out[i]):
            indegree[j] += 1
    ready = [i for i in range(n) if not indegree[i]]
    order = []
    while ready:
        i = ready.pop()
        order.append(i)
        for j in bits(out[i]):
            indegree[j] -= 1
            if not indegree[j]:
                ready.append(j)
    return order if len(order) == n else None


def _closure(out: Sequence[int]) -> Optional[List[int]]:
    """reach[i] = vertices reachable from i by a directed path of length >= 1."""
    order = _topological_order(out)
    if order is None:
        return None
    reach = [0] * len(out)
    for i in reversed(order):
        row = 0
        for j in bits(out[i]):
            row |= 1 << j | reach[j]
        reach[i] = row
    return reach


def _path(out: Sequence[int], start: int, end: int) -> List[int]:
    """A shortest directed path start => end; end must be reachable."""
    if start == end:
        return [start]
    parent = {start: start}
    queue = deque([start])
    while queue:
        i = queue.popleft()
        for j in bits(out[i]):
            if j in parent:
                continue
            parent[j] = i
            if j == end:
                path = [end]
                while path[-1] != start:
                    path.append(parent[path[-1]])
                return path[::-1]
            queue.append(j)
    raise OrientationError(f"No directed path from index {start} to {end}.")


def _find_directed_cycle(out: Sequence[int]) -> List[int]:
    n = len(out)
    colour = [0] * n
    stack: List[int] = []

    def visit(i: int) -> Optional[List[int]]:
        colour[i] = 1
        stack.append(i)
        for j in bits(out[i]):
            if colour[j] == 1:
                return stack[stack.index(j) :]
            if colour[j] == 0:
                found = visit(j)
                if found:
                    return found
        colour[i] = 2
        stack.pop()
        return None

    for i in range(n):
        if colour[i] == 0:
            found = visit(i)
            if found:
                return found
    raise OrientationError("Orientation has no directed cycle.")


def _shortcut(adj: Sequence[int], out: Sequence[int], reach: Sequence[int]):
    """An arc u->v and a non-adjacent pair x, y with u =>* x =>+ y =>* v, as index path and pair."""
    n = len(out)
    star = [reach[i] | 1 << i for i in range(n)]
    coreach = [0] * n
    for x in range(n):
        for v in bits(star[x]):
            coreach[v] |= 1 << x
    for u in range(n):
        for v in bits(out[u]):
            for x in bits(star[u] & coreach[v]):
                ys = reach[x] & coreach[v] & ~adj[x]
                if ys:
                    y = (ys & -ys).bit_length() - 1
                    path = _path(out, u, x) + _path(out, x, y)[1:] + _path(out, y, v)[1:]
                    return path, (x, y)
    return None


def _witness(G: Graph, path: Sequence[int], pair: Tuple[int, int]) -> ShortcutWitness:
    return ShortcutWitness(tuple(G.labels[i] for i in path), (G.labels[pair[0]], G.labels[pair[1]]))


def _require_complete(D: PartialOrientation):
    if not D.is_complete():
        raise OrientationError(f"{D} leaves {len(D.unoriented())} edges unoriented.")


def is_acyclic(D: PartialOrientation) -> bool:
    _require_complete(D)
    return _topological_order(D.out) is not None


def find_shortcut(D: PartialOrientation) -> Optional[ShortcutWitness]:
    _require_complete(D)
    reach = _closure(D.out)
    if reach is None:
        raise OrientationError(f"{D} contains a directed cycle.")
    found = _shortcut(D.host.adj, D.out, reach)
    return _witness(D.host, *found) if found else None


def is_semi_transitive(D: PartialOrientation) -> bool:
    _require_complete(D)
    return _semi_transitive_out(D.host.adj, D.out)


def _semi_transitive_out(adj: Sequence[int], out: Sequence[int]) -> bool:
    reach = _closure(out)
    return reach is not None and _shortcut(adj, out, reach) is None


def _naive_candidates(G: Graph, source: Optional[int]) -> Iterator[List[int]]:
    """Acyclic orientations (as out masks), by vertex order or by edge mask, whichever space is smaller."""
    if G.edge_count > NAIVE_EDGE_LIMIT:
        raise SearchLimitError(f"{G} has more than {NAIVE_EDGE_LIMIT} edges for the naive oracle.")
    s = G.index(source) if source is not None else None
    edges = [(i, j) for i, j in G.edge_indices() if s is None or s not in (i, j)]
    vertices = [i for i in range(G.n) if i != s]
    if math.factorial(len(vertices)) <= 1 << len(edges):
        for order in permutations(vertices):
            if s is not None:
                order = (s,) + order
            later = G.full_mask
            out = [0] * G.n
            for i in order:
                later &= ~(1 << i)
                out[i] = G.adj[i] & later
            yield out
        return
    for choice in product((0, 1), repeat=len(edges)):
        out = [0] * G.n
        if s is not None:
            out[s] = G.adj[s]
        for (i, j), flip in zip(edges, choice):
            if flip:
                out[j] |= 1 << i
            else:
                out[i] |= 1 << j
        if _topological_order(out) is not None:
            yield out


def find_semi_transitive_naive(G: Graph, source: Optional[int] = None) -> Optional[PartialOrientation]:
    for out in _naive_candidates(G, source):
        if _semi_transitive_out(G.adj, out):
            return PartialOrientation(G, out)
    return None


def exists_semi_transitive_naive(G: Graph, source: Optional[int] = None) -> bool:
    """Exhaustive decision; with `source`, only orientations where it is a source count."""
    return find_semi_transitive_naive(G, source) is not None


def semi_transitive_completions(P: PartialOrientation) -> Iterator[PartialOrientation]:
    G = P.host
    free = [(i, j) for i, j in G.edge_indices() if not _direction(P.out, i, j)]
    if len(free) > COMPLETION_LIMIT:
        raise SearchLimitError(f"{P} has more than {COMPLETION_LIMIT} unoriented edges.")
    for choice in product((0, 1), repeat=len(free)):
        out = list(P.out)
        for (i, j), flip in zip(free, choice):
            if flip:
                out[j] |= 1 << i
            else:
                out[i] |= 1 << j
        if _semi_transitive_out(G.adj, out):
            yield PartialOrientation(G, out)


def _edge_key(i: int, j: int) -> int:
    return i << 6 | j if i < j else j << 6 | i


class CycleIndex:
    """Cycles the propagation rules inspect, with a watch list per edge.

    Triangles are always kept; longer cycles only when their vertex set is not a
    clique, since the triangle rule already covers the rest. Each cycle is stored
    once, starting at its lowest index with the second vertex below the last.
    """

    def __init__(self, host: Graph, max_length: int = DEFAULT_CYCLE_LENGTH):
        max_length = max(3, min(max_length, host.n))
        self.host = host
        self.max_length = max_length
        self.cycles: List[Tuple[int, ...]] = []
        self.watch: Dict[int, List[int]] = {}
        adj = host.adj
        for s in range(host.n):
            above = ~((1 << (s + 1)) - 1)
            self._walk(adj, s, [s], 1 << s, above)
        logger.debug(f"Graph.n={host.n} cycle index length<={max_length} cycles={len(self.cycles)}")

    def _walk(self, adj, s, path, used, above):
        last = path[-1]
        if len(path) >= 3 and adj[last] >> s & 1 and path[1] < last:
            if len(path) == 3 or not self.host.is_clique_mask(used):
                self._add(tuple(path))
        if len(path) == self.max_length:
            return
        for nxt in bits(adj[last] & ~used & above):
            path.append(nxt)
            self._walk(adj, s, path, used | 1 << nxt, above)
            path.pop()

    def _add(self, cycle):
        cid = len(self.cycles)
        self.cycles.append(cycle)
        m = len(cycle)
        for k in range(m):
            self.watch.setdefault(_edge_key(cycle[k], cycle[(k + 1) % m]), []).append(cid)


@dataclass(frozen=True)
class Step:
    """Arcs forced by one cycle: one arc (acyclicity or a single open edge) or two."""

    arcs: Tuple[Tuple[int, int], ...]
    cycle: Tuple[int, ...]


@dataclass(frozen=True)
class Conflict:
    """A dead partial state.

    kind "shortcut" carries `witness`; kind "cycle" carries a directed `cycle`;
    kind "split" names an open `edge` whose orientation a->b closes `cycle` and
    whose reverse b->a creates `witness`.
    """

    kind: str
    witness: Optional[ShortcutWitness] = None
    cycle: Tuple[int, ...] = ()
    edge: Optional[Tuple[int, int]] = None


@dataclass
class Propagation:
    orientation: PartialOrientation
    steps: List[Step]
    conflict: Optional[Conflict]


class _State:
    __slots__ = ("out", "reach")

    def __init__(self, out: List[int], reach: List[int]):
        self.out = out
        self.reach = reach

    def copy(self) -> "_State":
        return _State(list(self.out), list(self.reach))


class _Propagator:
    def __init__(self, host: Graph, index: CycleIndex):
        self.host = host
        self.index = index
        self.labels = host.labels

    def assign(self, state: _State, i: int, j: int) -> Optional[Conflict]:
        """Add arc i->j; a directed cycle through it is returned as a conflict."""
        if state.out[i] >> j & 1:
            return None
        state.out[i] |= 1 << j
        if state.reach[j] >> i & 1:
            back = _path(state.out, j, i)
            return Conflict("cycle", cycle=tuple(self.labels[v] for v in [i] + back[:-1]))
        gain = 1 << j | state.reach[j]
        reach = state.reach
        for x in range(len(reach)):
            if x == i or reach[x] >> i & 1:
                reach[x] |= gain
        return None

    def run(self, state: _State, keys: Iterable[int], steps: List[Step]) -> Optional[Conflict]:
        queue = deque(keys)
        while queue:
            key = queue.popleft()
            for cid in self.index.watch.get(key, ()):
                conflict = self._evaluate(state, cid, queue, steps)
                if conflict is not None:
                    return conflict
        found = _shortcut(self.host.adj, state.out, state.reach)
        if found:
            return Conflict("shortcut", witness=_witness(self.host, *found))
        return None

    def _evaluate(self, state: _State, cid: int, queue: deque, steps: List[Step]) -> Optional[Conflict]:
        cycle = self.index.cycles[cid]
        m = len(cycle)
        states = [_direction(state.out, cycle[k], cycle[(k + 1) % m]) for k in range(m)]
        zeros = [k for k in range(m) if not states[k]]
        for d in (1, -1):
            consistent = states.count(d)
            if m == 3:
                if consistent == 2 and zeros:
                    return self._force(state, cycle, zeros, d, queue, steps)
                continue
            if consistent == m - 1:
                return self._dead_cycle(state, cycle, states, d)
            if consistent == m - 2 and zeros:
                return self._force(state, cycle, zeros, d, queue, steps)
        return None

    def _force(self, state, cycle, positions, d, queue, steps) -> Optional[Conflict]:
        m = len(cycle)
        arcs = []
        for k in positions:
            a, b = cycle[k], cycle[(k + 1) % m]
            arcs.append((b, a) if d == 1 else (a, b))
        labels = self.labels
        steps.append(
            Step(tuple((labels[i], labels[j]) for i, j in arcs), tuple(labels[v] for v in cycle))
        )
        for i, j in arcs:
            conflict = self.assign(state, i, j)
            if conflict is not None:
                return conflict
            queue.append(_edge_key(i, j))
        return None

    def _dead_cycle(self, state, cycle, states, d) -> Conflict:
        """m-1 edges of a non-clique cycle agree: a shortcut, or one open edge that cannot be oriented."""
        if d == -1:
            cycle = cycle[::-1]
            states = [-s for s in states[::-1]]
            states = states[1:] + states[:1]
        m = len(cycle)
        k = next(k for k in range(m) if states[k] != 1)
        path = [cycle[(k + 1 + t) % m] for t in range(m)]
        adj = self.host.adj
        pair = next(
            (path[a], path[b])
            for a in range(m)
            for b in range(a + 1, m)
            if not adj[path[a]] >> path[b] & 1
        )
        witness = _witness(self.host, path, pair)
        if states[k] == -1:
            return Conflict("shortcut", witness=witness)
        labels = self.labels
        a, b = cycle[k], cycle[(k + 1) % m]
        return Conflict(
            "split",
            witness=witness,
            cycle=tuple(labels[v] for v in cycle),
            edge=(labels[a], labels[b]),
        )


def _state_of(P: PartialOrientation) -> Optional[_State]:
    reach = _closure(P.out)
    if reach is None:
        return None
    return _State(list(P.out), reach)


def propagate(P: PartialOrientation, max_cycle_length: int = DEFAULT_CYCLE_LENGTH) -> Propagation:
    """Close P under the triangle and cycle rules, recording each forcing step."""
    G = P.host
    state = _state_of(P)
    if state is None:
        cycle = tuple(G.labels[i] for i in _find_directed_cycle(P.out))
        return Propagation(P, [], Conflict("cycle", cycle=cycle))
    steps: List[Step] = []
    propagator = _Propagator(G, CycleIndex(G, max_cycle_length))
    keys = [_edge_key(i, j) for i in range(G.n) for j in bits(P.out[i])]
    conflict = propagator.run(state, keys, steps)
    return Propagation(PartialOrientation(G, state.out), steps, conflict)


@dataclass
class SearchOptions:
    source: Optional[int] = None
    sink: bool = False
    max_cycle_length: int = DEFAULT_CYCLE_LENGTH
    threads: int = 1


@dataclass
class RefutationNode:
    """Forced steps, then either a conflict or a branch on `branch` with two children.

    children[0] continues with the branch arc, children[1] with its reverse.
    """

    steps: List[Step] = field(default_factory=list)
    conflict: Optional[Conflict] = None
    branch: Optional[Tuple[int, int]] = None
    children: List["RefutationNode"] = field(default_factory=list)

    def size(self) -> int:
        return 1 + sum(child.size() for child in self.children)


@dataclass
class RefutationLog:
    host: Graph
    anchor: int
    sink: bool
    root: RefutationNode


@dataclass
class Certificate:
    orientation: Optional[PartialOrientation] = None
    refutation: Optional[RefutationLog] = None

    @property
    def representable(self) -> bool:
        return self.orientation is not None


class _Searcher:
    def __init__(self, host: Graph, max_cycle_length: int):
        self.host = host
        self.propagator = _Propagator(host, CycleIndex(host, max_cycle_length))
        self.degree = [popcount(row) for row in host.adj]
        self.edges = sorted(
            host.edge_indices(),
            key=lambda e: tuple(sorted((host.labels[e[0]], host.labels[e[1]]))),
        )

    def choose(self, state: _State) -> Optional[Tuple[int, int]]:
        """The open edge with most oriented triangles, then largest degree sum, then lowest labels."""
        out = state.out
        touched = list(out)
        for i in range(len(out)):
            for j in bits(out[i]):
                touched[j] |= 1 << i
        adj = self.host.adj
        best, best_key = None, None
        for i, j in self.edges:
            if touched[i] >> j & 1:
                continue
            key = (
                popcount(adj[i] & adj[j] & touched[i] & touched[j]),
                self.degree[i] + self.degree[j],
            )
            if best_key is None or key > best_key:
                best, best_key = (i, j), key
        if best is None:
            return None
        i, j = best
        return (i, j) if self.host.labels[i] < self.host.labels[j] else (j, i)

    def expand(self, state: _State, keys: List[int], depth: Optional[int], pending: list):
        """Propagate and branch; returns (orientation out masks or None, node).

        When `depth` reaches zero the subproblem is parked in `pending` instead of solved.
        """
        node = RefutationNode()
        conflict = self.propagator.run(state, keys, node.steps)
        if conflict is not None:
            _settle(node, conflict)
            return None, node
        edge = self.choose(state)
        if edge is None:
            return state.out, node
        i, j = edge
        labels = self.host.labels
        node.branch = (labels[i], labels[j])
        for a, b in ((i, j), (j, i)):
            child_state = state.copy()
            conflict = self.propagator.assign(child_state, a, b)
            if conflict is not None:
                node.children.append(RefutationNode(conflict=conflict))
                continue
            if depth == 0:
                child = RefutationNode()
                node.children.append(child)
                pending.append((child, child_state, [_edge_key(a, b)]))
                continue
            found, child = self.expand(
                child_state, [_edge_key(a, b)], None if depth is None else depth - 1, pending
            )
            if found is not None:
                return found, None
            node.children.append(child)
        return None, node


def _settle(node: RefutationNode, conflict: Conflict):
    if conflict.kind != "split":
        node.conflict = conflict
        return
    node.branch = conflict.edge
    node.children = [
        RefutationNode(conflict=Conflict("cycle", cycle=conflict.cycle)),
        RefutationNode(conflict=Conflict("shortcut", witness=conflict.witness)),
    ]


def _solve_parked(host: Graph, max_cycle_length: int, out, reach, keys):
    searcher = _Searcher(host, max_cycle_length)
    return searcher.expand(_State(out, reach), keys, None, [])


def default_anchor(G: Graph) -> int:
    """The lowest-labelled vertex of maximum degree."""
    return min(G.labels, key=lambda label: (-G.degree(label), label))


def search_semi_transitive(G: Graph, opts: Optional[SearchOptions] = None) -> Certificate:
    opts = opts or SearchOptions()
    anchor = opts.source if opts.source is not None else default_anchor(G)
    start = anchored(G, anchor, sink=opts.sink)
    searcher = _Searcher(G, opts.max_cycle_length)
    state = _state_of(start)
    keys = [_edge_key(i, j) for i in range(G.n) for j in bits(start.out[i])]
    logger.debug(f"Graph.n={G.n} m={G.edge_count} anchor={anchor} sink={opts.sink} threads={opts.threads}")

    if opts.threads <= 1:
        found, root = searcher.expand(state, keys, None, [])
    else:
        pending: list = []
        depth = max(1, math.ceil(math.log2(opts.threads * 4)))
        found, root = searcher.expand(state, keys, depth, pending)
        if found is None and pending:
            found = _solve_pending(G, opts, pending)

    if found is not None:
        orientation = PartialOrientation(G, found)
        logger.debug(f"Graph.n={G.n} semi-transitive orientation found")
        return Certificate(orientation=orientation)
    logger.debug(f"Graph.n={G.n} refuted with {root.size()} nodes")
    return Certificate(refutation=RefutationLog(G, anchor, opts.sink, root))


def _solve_pending(G: Graph, opts: SearchOptions, pending: list):
    executor = ProcessPoolExecutor(max_workers=opts.threads)
    found = None
    try:
        futures = {
            executor.submit(_solve_parked, G, opts.max_cycle_length, state.out, state.reach, keys): node
            for node, state, keys in pending
        }
        for future in as_completed(futures):
            found, solved = future.result()
            if found is not None:
                break
            placeholder = futures[future]
            placeholder.steps = solved.steps
            placeholder.conflict = solved.conflict
            placeholder.branch = solved.branch
            placeholder.children = solved.children
    finally:
        # running workers are abandoned once an orientation is found
        executor.shutdown(wait=found is None, cancel_futures=True)
    return found
