"""Immutable labelled graphs on at most 64 vertices.

Vertices carry external labels (the names used in drawings and transcripts) and
internal indices 0..n-1. Adjacency is one bitmask per index, so neighbourhood
tests and set operations are single integer operations. Every public function
takes and returns external labels; helpers ending in ``_mask`` work on indices.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .exceptions import GraphError, SearchLimitError

logger = logging.getLogger(__name__)

MAX_VERTICES = 64
MAX_ENUMERATION_SIZE = 8


def bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of mask, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


@dataclass(frozen=True)
class Graph:
    adj: Tuple[int, ...]
    labels: Tuple[int, ...]

    def __str__(self):
        return f"Graph(n={self.n}, m={self.edge_count})"

    @property
    def n(self) -> int:
        return len(self.adj)

    @cached_property
    def edge_count(self) -> int:
        return sum(popcount(row) for row in self.adj) // 2

    @cached_property
    def _positions(self) -> Dict[int, int]:
        return {label: i for i, label in enumerate(self.labels)}

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def vertices(self) -> Tuple[int, ...]:
        return self.labels

    def index(self, label: int) -> int:
        try:
            return self._positions[label]
        except KeyError:
            raise GraphError(f"Vertex {label} is not in {self}.") from None

    def label(self, i: int) -> int:
        return self.labels[i]

    def mask_of(self, labels: Iterable[int]) -> int:
        mask = 0
        for label in labels:
            mask |= 1 << self.index(label)
        return mask

    def labels_of(self, mask: int) -> Tuple[int, ...]:
        return tuple(self.labels[i] for i in bits(mask))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[self.index(u)] >> self.index(v) & 1)

    def degree(self, u: int) -> int:
        return popcount(self.adj[self.index(u)])

    def neighbours(self, u: int) -> frozenset:
        return frozenset(self.labels_of(self.adj[self.index(u)]))

    def edge_indices(self) -> List[Tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in bits(self.adj[i] >> (i + 1) << (i + 1))]

    def edges(self) -> List[Tuple[int, int]]:
        """Edges as label pairs (smaller label first), sorted."""
        pairs = []
        for i, j in self.edge_indices():
            u, v = self.labels[i], self.labels[j]
            pairs.append((u, v) if u < v else (v, u))
        return sorted(pairs)

    def is_clique_mask(self, mask: int) -> bool:
        return all((self.adj[i] | 1 << i) & mask == mask for i in bits(mask))

    def is_clique(self, labels: Iterable[int]) -> bool:
        return self.is_clique_mask(self.mask_of(labels))

    def relabel(self, mapping: Dict[int, int]) -> "Graph":
        """Rename vertices; labels missing from mapping keep their name."""
        labels = tuple(mapping.get(label, label) for label in self.labels)
        _check_labels(labels)
        return Graph(self.adj, labels)

    def permute(self, order: Sequence[int]) -> "Graph":
        """Return the graph whose i-th vertex is the old index order[i], labelled 1..n."""
        if sorted(order) != list(range(self.n)):
            raise GraphError(f"{list(order)} is not a permutation of 0..{self.n - 1}.")
        position = {old: new for new, old in enumerate(order)}
        adj = tuple(
            sum(1 << position[j] for j in bits(self.adj[old])) for old in order
        )
        return Graph(adj, tuple(range(1, self.n + 1)))


def _check_labels(labels: Sequence[int]):
    if len(set(labels)) != len(labels):
        raise GraphError(f"Vertex labels {list(labels)} are not distinct.")
    for label in labels:
        if not isinstance(label, int) or label < 0:
            raise GraphError(f"Vertex label {label!r} is not a non-negative integer.")


def build_graph(
    n: int,
    edges: Iterable[Tuple[int, int]],
    labels: Optional[Sequence[int]] = None,
) -> Graph:
    """Build a graph on n vertices labelled 1..n (or by `labels`)."""
    if not 1 <= n <= MAX_VERTICES:
        raise GraphError(f"Vertex count {n} is outside 1..{MAX_VERTICES}.")
    labels = tuple(labels) if labels is not None else tuple(range(1, n + 1))
    if len(labels) != n:
        raise GraphError(f"Expected {n} labels, got {len(labels)}.")
    _check_labels(labels)
    position = {label: i for i, label in enumerate(labels)}
    adj = [0] * n
    for edge in edges:
        u, v = edge
        if u == v:
            raise GraphError(f"Loop at vertex {u}.")
        if u not in position or v not in position:
            raise GraphError(f"Edge {u}-{v} has a vertex out of range.")
        i, j = position[u], position[v]
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return Graph(tuple(adj), labels)


def complete_graph(n: int) -> Graph:
    return build_graph(n, combinations(range(1, n + 1), 2))


def cycle_graph(n: int) -> Graph:
    return build_graph(n, [(i, i % n + 1) for i in range(1, n + 1)])


def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(1, n)])


def wheel_graph(rim: int = 5) -> Graph:
    """A rim-cycle on 1..rim plus a hub rim+1 adjacent to all of it."""
    edges = [(i, i % rim + 1) for i in range(1, rim + 1)]
    edges += [(i, rim + 1) for i in range(1, rim + 1)]
    return build_graph(rim + 1, edges)


def induced_mask(G: Graph, mask: int) -> Graph:
    """The subgraph induced by the index set `mask`; labels are preserved."""
    if not mask:
        raise GraphError("Cannot induce a subgraph on an empty vertex set.")
    members = list(bits(mask))
    adj = []
    for i in members:
        row = G.adj[i]
        adj.append(sum(1 << p for p, j in enumerate(members) if row >> j & 1))
    return Graph(tuple(adj), tuple(G.labels[i] for i in members))


def induced_subgraph(G: Graph, S: Iterable[int]) -> Graph:
    return induced_mask(G, G.mask_of(S))


def delete_vertices(G: Graph, S: Iterable[int]) -> Graph:
    return induced_mask(G, G.full_mask & ~G.mask_of(S))


@dataclass(frozen=True, order=True)
class CanonicalCode:
    """Byte code of an isomorphism class: the vertex count, then the packed
    upper triangle of the lexicographically largest relabelling reached by the
    refinement search."""

    code: bytes

    def __str__(self):
        return self.code.hex()

    @property
    def n(self) -> int:
        return self.code[0]


def _refine(adj: Sequence[int], cells: List[List[int]]) -> List[List[int]]:
    """Split cells by neighbour counts into every cell until the partition is equitable."""
    while True:
        masks = [sum(1 << v for v in cell) for cell in cells]
        refined = []
        for cell in cells:
            if len(cell) == 1:
                refined.append(cell)
                continue
            signature = {v: tuple(popcount(adj[v] & m) for m in masks) for v in cell}
            keys = sorted(set(signature.values()))
            if len(keys) == 1:
                refined.append(cell)
            else:
                refined.extend([v for v in cell if signature[v] == key] for key in keys)
        if len(refined) == len(cells):
            return refined
        cells = refined


def _order_code(adj: Sequence[int], order: Sequence[int]) -> int:
    code = 0
    for j in range(1, len(order)):
        row = adj[order[j]]
        for i in range(j):
            code = code << 1 | (row >> order[i] & 1)
    return code


def _are_twins(adj: Sequence[int], u: int, v: int) -> bool:
    return adj[u] & ~(1 << v) == adj[v] & ~(1 << u)


def canonical_form(G: Graph) -> CanonicalCode:
    adj = G.adj
    n = G.n
    best = -1
    stack = [_refine(adj, [list(range(n))])]
    while stack:
        cells = stack.pop()
        target = next((k for k, cell in enumerate(cells) if len(cell) > 1), None)
        if target is None:
            best = max(best, _order_code(adj, [cell[0] for cell in cells]))
            continue
        cell = cells[target]
        representatives = []
        for v in cell:
            # swapping two twins is an automorphism, so one branch per twin class suffices
            if not any(_are_twins(adj, v, w) for w in representatives):
                representatives.append(v)
        for v in reversed(representatives):
            split = cells[:target] + [[v], [w for w in cell if w != v]] + cells[target + 1 :]
            stack.append(_refine(adj, split))
    width = n * (n - 1) // 2
    body = best.to_bytes((width + 7) // 8, "big") if width else b""
    return CanonicalCode(bytes([n]) + body)


def is_isomorphic(G: Graph, H: Graph) -> bool:
    if G.n != H.n or G.edge_count != H.edge_count:
        return False
    return canonical_form(G) == canonical_form(H)


@dataclass(frozen=True)
class Embedding:
    """Induced-subgraph isomorphism from a pattern into a host, by label."""

    map: Dict[int, int]

    def image(self) -> frozenset:
        return frozenset(self.map.values())


def _pattern_order(P: Graph) -> List[int]:
    """Pattern indices ordered so each vertex has as many earlier neighbours as possible."""
    remaining = set(range(P.n))
    order = []
    placed = 0
    while remaining:
        v = max(remaining, key=lambda i: (popcount(P.adj[i] & placed), popcount(P.adj[i]), -i))
        order.append(v)
        placed |= 1 << v
        remaining.discard(v)
    return order


def contains_induced(G: Graph, P: Graph) -> Optional[Embedding]:
    if P.n > G.n:
        return None
    order = _pattern_order(P)
    pattern_degree = [popcount(P.adj[p]) for p in order]
    host_degree = [popcount(row) for row in G.adj]
    image: List[int] = []

    def extend(k: int, used: int) -> bool:
        if k == len(order):
            return True
        p = order[k]
        candidates = G.full_mask & ~used
        for q, h in zip(order[:k], image):
            if P.adj[p] >> q & 1:
                candidates &= G.adj[h]
            else:
                candidates &= ~G.adj[h]
        for h in bits(candidates):
            if host_degree[h] < pattern_degree[k]:
                continue
            image.append(h)
            if extend(k + 1, used | 1 << h):
                return True
            image.pop()
        return False

    if not extend(0, 0):
        return None
    return Embedding({P.labels[p]: G.labels[h] for p, h in zip(order, image)})


def twin_reduce(G: Graph) -> Tuple[Graph, List[Tuple[int, int]]]:
    """Delete the higher-labelled vertex of a twin pair until none remain.

    Returns the reduced graph and the (kept, removed) label pairs in removal order.
    """
    removed = []
    mask = G.full_mask
    by_label = sorted(range(G.n), key=lambda i: G.labels[i])
    found = True
    while found:
        found = False
        alive = [i for i in by_label if mask >> i & 1]
        for a, u in enumerate(alive):
            for v in alive[a + 1 :]:
                if G.adj[u] & mask & ~(1 << v) == G.adj[v] & mask & ~(1 << u):
                    removed.append((G.labels[u], G.labels[v]))
                    mask &= ~(1 << v)
                    found = True
                    break
            if found:
                break
    if not removed:
        return G, removed
    logger.debug(f"Graph.n={G.n} twin reduction removed {[r for _, r in removed]}")
    return induced_mask(G, mask), removed


def is_connected(G: Graph) -> bool:
    if not G.n:
        return True
    reached = frontier = 1
    while frontier:
        grown = reached
        for i in bits(frontier):
            grown |= G.adj[i]
        frontier = grown & ~reached
        reached = grown
    return reached == G.full_mask


def is_three_colourable(G: Graph) -> bool:
    order = sorted(range(G.n), key=lambda i: -popcount(G.adj[i]))
    classes = [0, 0, 0]

    def colour(k: int) -> bool:
        if k == len(order):
            return True
        v = order[k]
        tried_empty = False
        for c in range(3):
            if G.adj[v] & classes[c]:
                continue
            if not classes[c]:
                # empty classes are interchangeable
                if tried_empty:
                    continue
                tried_empty = True
            classes[c] |= 1 << v
            if colour(k + 1):
                return True
            classes[c] &= ~(1 << v)
        return False

    return colour(0)


def enumerate_graphs(n: int) -> Iterator[Graph]:
    """Yield one graph per isomorphism class on n vertices, labelled 1..n.

    Level k+1 is built by adding a vertex with every possible neighbourhood to
    each class of level k, keeping the first graph seen for each canonical code.
    """
    if not 1 <= n <= MAX_ENUMERATION_SIZE:
        raise SearchLimitError(f"Enumeration is limited to 1..{MAX_ENUMERATION_SIZE} vertices, got {n}.")
    level = [Graph((0,), (1,))]
    for k in range(1, n):
        seen = set()
        following = []
        for G in level:
            for neighbourhood in range(1 << k):
                adj = [row | (neighbourhood >> i & 1) << k for i, row in enumerate(G.adj)]
                adj.append(neighbourhood)
                H = Graph(tuple(adj), tuple(range(1, k + 2)))
                code = canonical_form(H)
                if code not in seen:
                    seen.add(code)
                    following.append(H)
        logger.debug(f"enumerate_graphs n={k + 1} classes={len(following)}")
        level = following
    yield from level
