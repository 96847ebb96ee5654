"""Tests for the graph6, edge-list, orientation, DOT and networkx formats."""

import networkx as nx
import pytest

from ..codecs import (
    detect_format,
    format_dot,
    format_edge_list,
    format_graph6,
    format_orientation,
    from_networkx,
    load_graph,
    parse_edge_list,
    parse_graph6,
    parse_orientation,
    read_metadata,
    to_networkx,
)
from ..exceptions import FormatError
from ..graphs import build_graph, complete_graph, path_graph, wheel_graph
from ..orientation import PartialOrientation
from .. import factories


@pytest.mark.parametrize("G,text", [(build_graph(1, []), "@"), (complete_graph(3), "Bw"), (path_graph(2), "A_")])
def test_graph6_known_strings(G, text):
    """Small graphs encode to their standard graph6 strings"""
    assert format_graph6(G) == text
    assert parse_graph6(text) == G


def test_graph6_header():
    assert parse_graph6(">>graph6<<Bw") == complete_graph(3)


@pytest.mark.parametrize("text", ["", "B", "Bx", "B w", "Bww"])
def test_graph6_rejects(text):
    """Missing, stray, padded or surplus data bytes are refused"""
    with pytest.raises(FormatError):
        parse_graph6(text)


def test_graph6_large():
    """Graphs over 62 vertices use the long size header"""
    G = path_graph(63)
    text = format_graph6(G)
    assert text.startswith("~")
    assert parse_graph6(text) == G


EDGES = """# name: example
# labels: 1 2 3 10
4 3
1 2
2 3   # inline comment
3 10
"""


def test_parse_edge_list():
    G = parse_edge_list(EDGES)
    assert G.labels == (1, 2, 3, 10)
    assert G.edges() == [(1, 2), (2, 3), (3, 10)]
    assert read_metadata(EDGES)["name"] == "example"
    assert parse_edge_list(format_edge_list(G)) == G


@pytest.mark.parametrize(
    "text",
    [
        "",
        "3\n1 2\n",
        "3 2\n1 2\n",
        "3 2\n1 2\n2 1\n",
        "3 1\n1 x\n",
        "3 1\n1 4\n",
        "3 1\n1 2 3\n",
    ],
)
def test_parse_edge_list_rejects(text):
    """Bad headers, wrong counts, duplicate edges and stray vertices are refused"""
    with pytest.raises(FormatError):
        parse_edge_list(text)


@pytest.mark.parametrize(
    "text,fmt",
    [("Bw\n", "graph6"), (">>graph6<<Bw", "graph6"), ("# c\n3 0\n", "edges"), ("3 1\n1 2\n", "edges")],
)
def test_detect_format(text, fmt):
    assert detect_format(text) == fmt


def test_load_graph_undetectable():
    with pytest.raises(FormatError):
        load_graph("not a graph at all\n")


def test_parse_orientation():
    G = path_graph(3)
    P = parse_orientation(G, "# arcs\n1>2\n3>2\n")
    assert P.arcs() == [(1, 2), (3, 2)]
    assert P.is_complete()
    assert format_orientation(P) == "1>2\n3>2\n"


@pytest.mark.parametrize("text", ["1>3\n", "1-2\n", "1>2 2>1\n"])
def test_parse_orientation_rejects(text):
    """Non-edges, malformed tokens and edges given both ways are refused"""
    with pytest.raises(FormatError):
        parse_orientation(path_graph(3), text)


def test_format_dot():
    G = path_graph(3)
    assert "1 -- 2;" in format_dot(G)
    dot = format_dot(G, PartialOrientation.from_arcs(G, [(2, 1)]))
    assert dot.startswith("digraph G {")
    assert "2 -> 1;" in dot
    assert "2 -- 3 [dir=none, style=dashed];" in dot


def test_networkx():
    """Integer-labelled networkx graphs keep their labels, others are numbered from 1"""
    petersen = from_networkx(nx.petersen_graph())
    assert petersen.n == 10 and petersen.edge_count == 15
    assert petersen.labels == tuple(range(10))
    named = from_networkx(nx.Graph([("a", "b"), ("b", "c")]))
    assert named.labels == (1, 2, 3) and named.edge_count == 2
    assert nx.is_isomorphic(to_networkx(wheel_graph()), nx.wheel_graph(6))


@pytest.mark.parametrize("n,density", [(1, 0.5), (7, 0.3), (7, 0.8), (12, 0.5), (63, 0.2)])
def test_graph6_matches_networkx(n, density):
    """graph6 strings agree byte for byte with the networkx writer"""
    for _ in range(5):
        G = factories.GraphFactory(n=n, density=density)
        expected = nx.to_graph6_bytes(to_networkx(G), nodes=list(G.labels), header=False)
        assert format_graph6(G) == expected.strip().decode()
