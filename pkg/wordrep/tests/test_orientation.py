"""Tests for orientations, propagation and the semi-transitive search."""

from concurrent.futures import Future

import pytest

from ..exceptions import GraphError, OrientationError, SearchLimitError
from ..graphs import build_graph, complete_graph, cycle_graph, enumerate_graphs, path_graph, wheel_graph
from ..orientation import (
    PartialOrientation,
    SearchOptions,
    anchored,
    default_anchor,
    exists_semi_transitive_naive,
    find_shortcut,
    is_acyclic,
    is_semi_transitive,
    propagate,
    search_semi_transitive,
    semi_transitive_completions,
)
from .. import factories, orientation


def test_from_arcs_rejects():
    with pytest.raises(GraphError):
        PartialOrientation.from_arcs(path_graph(3), [(1, 3)])
    with pytest.raises(OrientationError):
        PartialOrientation.from_arcs(path_graph(3), [(1, 2), (2, 1)])


def test_partial_orientation():
    G = cycle_graph(4)
    P = PartialOrientation.from_arcs(G, [(1, 2), (3, 2)])
    assert P.direction(2, 1) == -1
    assert P.has_arc(3, 2)
    assert P.unoriented() == [(1, 4), (3, 4)]
    assert not P.is_complete()
    Q = P.with_arcs([(2, 1), (4, 3)])
    assert Q.arcs() == [(2, 1), (3, 2), (4, 3)]
    assert P.reversed().arcs() == [(2, 1), (2, 3)]


def test_anchored():
    """A source has every edge leaving it, a sink every edge entering it"""
    G = wheel_graph()
    assert anchored(G, 6).arcs() == [(6, v) for v in range(1, 6)]
    assert anchored(G, 1, sink=True).arcs() == [(2, 1), (5, 1), (6, 1)]
    assert default_anchor(G) == 6


def test_transitive_orientation():
    """Orienting a clique by label order is semi-transitive"""
    G = complete_graph(5)
    D = PartialOrientation.from_arcs(G, G.edges())
    assert is_acyclic(D)
    assert is_semi_transitive(D)
    assert find_shortcut(D) is None


def test_shortcut():
    """1->2->3->4 with 1->4 on C4 is a shortcut: 1 and 3 are not adjacent"""
    G = cycle_graph(4)
    D = PartialOrientation.from_arcs(G, [(1, 2), (2, 3), (3, 4), (1, 4)])
    assert is_acyclic(D)
    assert not is_semi_transitive(D)
    witness = find_shortcut(D)
    assert witness.path == (1, 2, 3, 4)
    assert witness.missing_pair == (1, 3)


def test_directed_cycle():
    G = cycle_graph(3)
    D = PartialOrientation.from_arcs(G, [(1, 2), (2, 3), (3, 1)])
    assert not is_acyclic(D)
    assert not is_semi_transitive(D)
    with pytest.raises(OrientationError):
        find_shortcut(D)


def test_checks_need_complete_orientation():
    P = PartialOrientation.from_arcs(path_graph(3), [(1, 2)])
    for check in (is_acyclic, is_semi_transitive, find_shortcut):
        with pytest.raises(OrientationError):
            check(P)


def test_propagate_triangle():
    """Two arcs of a triangle force the third"""
    G = complete_graph(3)
    result = propagate(PartialOrientation.from_arcs(G, [(1, 2), (2, 3)]))
    assert result.conflict is None
    assert result.orientation.arcs() == [(1, 2), (1, 3), (2, 3)]
    assert [step.arcs for step in result.steps] == [((1, 3),)]


def test_propagate_square():
    """Two arcs along an induced C4 force the other two against them"""
    G = cycle_graph(4)
    result = propagate(PartialOrientation.from_arcs(G, [(1, 2), (2, 3)]))
    assert result.conflict is None
    assert result.orientation.arcs() == [(1, 2), (1, 4), (2, 3), (4, 3)]
    assert len(result.steps) == 1
    assert set(result.steps[0].arcs) == {(1, 4), (4, 3)}


def test_propagate_directed_cycle():
    G = cycle_graph(3)
    result = propagate(PartialOrientation.from_arcs(G, [(1, 2), (2, 3), (3, 1)]))
    assert result.conflict.kind == "cycle"
    assert set(result.conflict.cycle) == {1, 2, 3}


def test_propagate_shortcut():
    G = cycle_graph(4)
    result = propagate(PartialOrientation.from_arcs(G, [(1, 2), (2, 3), (3, 4), (1, 4)]))
    assert result.conflict.kind == "shortcut"


@pytest.mark.parametrize("G", [complete_graph(4), cycle_graph(5), cycle_graph(6), path_graph(5)])
def test_search_representable(G):
    """Representable graphs come back with a semi-transitive orientation"""
    found = search_semi_transitive(G)
    assert found.representable
    assert found.refutation is None
    assert is_semi_transitive(found.orientation)


def test_search_wheel():
    """W5 is refuted from its hub"""
    found = search_semi_transitive(wheel_graph())
    assert not found.representable
    assert found.refutation.anchor == 6
    assert found.refutation.root.size() >= 1


def test_search_sink():
    """A fixed sink is a sink of the orientation found"""
    found = search_semi_transitive(cycle_graph(5), SearchOptions(source=1, sink=True))
    assert found.orientation.has_arc(2, 1)
    assert found.orientation.has_arc(5, 1)
    assert is_semi_transitive(found.orientation)


def test_search_threads():
    """Parallel search reaches the same verdicts"""
    assert not search_semi_transitive(wheel_graph(), SearchOptions(threads=2)).representable
    assert search_semi_transitive(cycle_graph(7), SearchOptions(threads=2)).representable


class InlineExecutor:
    """Runs submitted work at once and records how it is shut down."""

    shutdowns = []

    def __init__(self, max_workers=None):
        pass

    def submit(self, fn, *args):
        future = Future()
        future.set_result(fn(*args))
        return future

    def shutdown(self, wait=True, cancel_futures=False):
        self.shutdowns.append((wait, cancel_futures))


def test_parked_search_stops_at_first_orientation(monkeypatch):
    """The pool is shut down without waiting once one parked subproblem yields an orientation"""
    monkeypatch.setattr(orientation, "ProcessPoolExecutor", InlineExecutor)
    monkeypatch.setattr(InlineExecutor, "shutdowns", [])
    G = complete_graph(5)
    start = anchored(G, 1)
    keys = [orientation._edge_key(i, j) for i in range(G.n) for j in orientation.bits(start.out[i])]
    pending = []
    found, _ = orientation._Searcher(G, 6).expand(orientation._state_of(start), keys, 0, pending)
    assert found is None
    assert len(pending) == 2

    found = orientation._solve_pending(G, SearchOptions(threads=2), pending)
    assert is_semi_transitive(PartialOrientation(G, found))
    assert InlineExecutor.shutdowns == [(False, True)]


@pytest.mark.parametrize("max_cycle_length", [3, 4, 6])
def test_search_cycle_length(max_cycle_length):
    """The cycle bound changes the work done, not the verdict"""
    opts = SearchOptions(max_cycle_length=max_cycle_length)
    assert not search_semi_transitive(wheel_graph(), opts).representable
    assert search_semi_transitive(cycle_graph(6), opts).representable


def test_search_agrees_with_naive():
    """Every graph on at most 5 vertices is representable, whichever way it is decided"""
    for n in range(1, 6):
        for G in enumerate_graphs(n):
            assert search_semi_transitive(G).representable
            assert exists_semi_transitive_naive(G)


def test_search_agrees_with_naive_on_random_graphs():
    for _ in range(20):
        G = factories.GraphFactory(n=6, density=0.6)
        assert search_semi_transitive(G).representable == exists_semi_transitive_naive(G)


def test_source_fixing_is_free():
    """On every graph up to 6 vertices, any vertex may be taken as the source"""
    for n in range(1, 7):
        for G in enumerate_graphs(n):
            representable = exists_semi_transitive_naive(G)
            for v in G.labels:
                assert exists_semi_transitive_naive(G, source=v) == representable, (G, v)
                assert search_semi_transitive(G, SearchOptions(source=v)).representable == representable, (G, v)


def test_naive_wheel():
    assert not exists_semi_transitive_naive(wheel_graph())
    assert not exists_semi_transitive_naive(wheel_graph(), source=1)


def test_naive_limit():
    with pytest.raises(SearchLimitError):
        exists_semi_transitive_naive(complete_graph(8))


def test_completions():
    """Forced arcs appear in every semi-transitive completion"""
    G = cycle_graph(4)
    P = PartialOrientation.from_arcs(G, [(1, 2), (2, 3)])
    completions = list(semi_transitive_completions(P))
    assert completions
    forced = propagate(P).orientation.arcs()
    for D in completions:
        assert all(D.has_arc(a, b) for a, b in forced)


def test_completions_limit():
    with pytest.raises(SearchLimitError):
        list(semi_transitive_completions(PartialOrientation(complete_graph(7))))


def test_empty_graph():
    """A graph without edges is trivially representable"""
    found = search_semi_transitive(build_graph(3, []))
    assert found.representable
    assert found.orientation.arcs() == []
