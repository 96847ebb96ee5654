"""Text formats for graphs and orientations.

graph6 follows the standard definition: a size prefix, then the upper triangle
of the adjacency matrix in column order, packed into 6-bit groups offset by 63.
The edge-list format is the human-editable one: an "n m" line, then m "u v"
lines, with '#' comments. Comment lines of the form "# key: value" carry
metadata; "# labels: ..." renames the vertices 1..n.
"""
import logging
import re
from typing import Dict, Optional

import networkx as nx

from .exceptions import FormatError, GraphError, OrientationError
from .graphs import Graph, build_graph
from .orientation import PartialOrientation

logger = logging.getLogger(__name__)

GRAPH6_HEADER = ">>graph6<<"
METADATA_RE = re.compile(r"^#\s*([A-Za-z_][\w-]*)\s*:\s*(.*?)\s*$")


def format_graph6(G: Graph) -> str:
    n = G.n
    if n <= 62:
        out = [chr(n + 63)]
    else:
        out = ["~"] + [chr((n >> shift & 63) + 63) for shift in (12, 6, 0)]
    bits_ = [G.adj[i] >> j & 1 for j in range(1, n) for i in range(j)]
    bits_ += [0] * (-len(bits_) % 6)
    for k in range(0, len(bits_), 6):
        value = 0
        for bit in bits_[k : k + 6]:
            value = value << 1 | bit
        out.append(chr(value + 63))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    text = text.strip()
    if text.startswith(GRAPH6_HEADER):
        text = text[len(GRAPH6_HEADER) :]
    if not text:
        raise FormatError("Empty graph6 string.")
    values = [ord(c) - 63 for c in text]
    if any(not 0 <= v < 64 for v in values):
        raise FormatError(f"graph6 string {text!r} contains characters outside '?'..'~'.")
    if values[0] == 63:
        if len(values) < 4 or values[1] == 63:
            raise FormatError(f"graph6 string {text!r} has an unsupported size header.")
        n = values[1] << 12 | values[2] << 6 | values[3]
        body = values[4:]
    else:
        n = values[0]
        body = values[1:]
    width = n * (n - 1) // 2
    if len(body) != (width + 5) // 6:
        raise FormatError(f"graph6 string {text!r} has {len(body)} data bytes, expected {(width + 5) // 6}.")
    stream = [v >> shift & 1 for v in body for shift in range(5, -1, -1)]
    if any(stream[width:]):
        raise FormatError(f"graph6 string {text!r} has non-zero padding bits.")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if stream[k]:
                edges.append((i + 1, j + 1))
            k += 1
    try:
        return build_graph(n, edges)
    except GraphError as e:
        raise FormatError(str(e)) from e


def read_metadata(text: str) -> Dict[str, str]:
    metadata = {}
    for line in text.splitlines():
        match = METADATA_RE.match(line.strip())
        if match:
            metadata[match.group(1).lower()] = match.group(2)
    return metadata


def _content_lines(text: str):
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield number, line


def _ints(line: str, number: int):
    try:
        return [int(token) for token in line.split()]
    except ValueError:
        raise FormatError(f"Line {number}: expected integers, got {line!r}.") from None


def parse_edge_list(text: str) -> Graph:
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("Edge list has no 'n m' header.")
    number, header = lines[0]
    counts = _ints(header, number)
    if len(counts) != 2:
        raise FormatError(f"Line {number}: header must be 'n m', got {header!r}.")
    n, m = counts
    edges = []
    for number, line in lines[1:]:
        pair = _ints(line, number)
        if len(pair) != 2:
            raise FormatError(f"Line {number}: expected 'u v', got {line!r}.")
        edges.append(tuple(pair))
    if len(edges) != m:
        raise FormatError(f"Edge list declares {m} edges but lists {len(edges)}.")
    labels = None
    declared = read_metadata(text).get("labels")
    if declared:
        labels = _ints(declared, 0)
    try:
        G = build_graph(n, [(u, v) for u, v in edges], labels=labels)
    except GraphError as e:
        raise FormatError(str(e)) from e
    if G.edge_count != m:
        raise FormatError(f"Edge list declares {m} edges but has {G.edge_count} distinct ones.")
    return G


def format_edge_list(G: Graph, metadata: Optional[Dict[str, str]] = None) -> str:
    lines = [f"# {key}: {value}" for key, value in (metadata or {}).items()]
    if list(G.labels) != list(range(1, G.n + 1)):
        lines.append("# labels: " + " ".join(str(label) for label in G.labels))
    edges = G.edges()
    lines.append(f"{G.n} {len(edges)}")
    lines += [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def detect_format(text: str) -> str:
    """'edges' when the first content line is an 'n m' header, else 'graph6'."""
    stripped = text.strip()
    if not stripped:
        raise FormatError("Empty graph input.")
    if stripped.startswith(GRAPH6_HEADER):
        return "graph6"
    lines = list(_content_lines(text))
    if lines and re.fullmatch(r"\d+\s+\d+", lines[0][1]):
        return "edges"
    if lines and len(lines) == 1 and re.fullmatch(r"[?-~]+", lines[0][1]):
        return "graph6"
    raise FormatError("Cannot tell whether the input is an edge list or graph6.")


def load_graph(text: str, fmt: Optional[str] = None) -> Graph:
    fmt = fmt or detect_format(text)
    if fmt == "graph6":
        return parse_graph6(next(_content_lines(text))[1])
    if fmt == "edges":
        return parse_edge_list(text)
    raise FormatError(f"Unknown graph format {fmt!r}.")


def format_orientation(P: PartialOrientation) -> str:
    return "".join(f"{u}>{v}\n" for u, v in P.arcs())


def parse_orientation(G: Graph, text: str) -> PartialOrientation:
    arcs = []
    for number, line in _content_lines(text):
        for token in line.split():
            match = re.fullmatch(r"(\d+)>(\d+)", token)
            if not match:
                raise FormatError(f"Line {number}: expected 'u>v', got {token!r}.")
            arcs.append((int(match.group(1)), int(match.group(2))))
    try:
        return PartialOrientation.from_arcs(G, arcs)
    except (GraphError, OrientationError) as e:
        raise FormatError(str(e)) from e


def format_dot(G: Graph, orientation: Optional[PartialOrientation] = None, name: str = "G") -> str:
    if orientation is None:
        lines = [f"graph {name} {{"]
        lines += [f"  {label};" for label in G.labels]
        lines += [f"  {u} -- {v};" for u, v in G.edges()]
    else:
        lines = [f"digraph {name} {{"]
        lines += [f"  {label};" for label in G.labels]
        lines += [f"  {u} -> {v};" for u, v in orientation.arcs()]
        lines += [f"  {u} -- {v} [dir=none, style=dashed];" for u, v in orientation.unoriented()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_networkx(G: Graph) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(G.labels)
    graph.add_edges_from(G.edges())
    return graph


def from_networkx(graph: nx.Graph) -> Graph:
    nodes = list(graph.nodes)
    if all(isinstance(node, int) and node >= 0 for node in nodes):
        labels = sorted(nodes)
        return build_graph(len(labels), graph.edges, labels=labels)
    position = {node: i for i, node in enumerate(nodes, start=1)}
    return build_graph(len(nodes), [(position[u], position[v]) for u, v in graph.edges])


def format_graphml(G: Graph) -> str:
    return "\n".join(nx.generate_graphml(to_networkx(G))) + "\n"
