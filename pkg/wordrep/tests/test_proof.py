"""Tests for parsing, formatting, replaying, emitting and mutating refutation transcripts."""

import pytest

from .. import assets
from ..exceptions import TranscriptError
from ..family import build_paper_graph
from ..graphs import complete_graph, wheel_graph
from ..orientation import search_semi_transitive
from ..proof import (
    Branch,
    DirectedCycle,
    Move,
    Orient1,
    Orient2,
    Shortcut,
    emit_transcript,
    format_instruction,
    format_transcript,
    mutate_transcript,
    parse_transcript,
    verify_transcript,
)


@pytest.fixture
def a3_text():
    return assets.read_asset("transcripts/A3.txt")


def test_parse_transcript(a3_text):
    t = parse_transcript(a3_text, strict=True)
    assert t.sink is False
    assert t.source_vertex == 10
    assert [line.number for line in t.lines] == [1, 2]
    assert t.lines[0].move is None
    assert t.lines[0].instructions[0] == Branch((8, 9), 2)
    assert t.lines[0].instructions[-1] == Shortcut((10, 8, 1, 9))
    assert t.lines[1].move == Move(2, (9, 8))
    assert Orient2(((1, 9), (8, 1)), (1, 9, 4, 8)) in t.lines[0].instructions
    assert not t.extended


def test_parse_alternative_arrows(a3_text):
    """ASCII and LaTeX arrows read the same as the unicode one"""
    t = parse_transcript(a3_text)
    assert parse_transcript(a3_text.replace("→", "->")) == t
    assert parse_transcript(a3_text.replace("→", "$\\rightarrow$")) == t


def test_parse_continuation_lines():
    """An unnumbered line continues the previous one"""
    t = parse_transcript("source 1\n1. O1→2 (C123)\n   S:1234\n")
    assert t.lines[0].instructions == (Orient1((1, 2), (1, 2, 3)), Shortcut((1, 2, 3, 4)))


@pytest.mark.parametrize(
    "instruction,text",
    [
        (Branch((8, 9), 2), "B8→9 (Copy 2)"),
        (Orient1((8, 2), (2, 10, 9, 8)), "O8→2 (C2(10)98)"),
        (Orient2(((1, 9), (8, 1)), (1, 9, 4, 8)), "O1→9 O8→1 (C1948)"),
        (Shortcut((10, 8, 1, 9)), "S:(10)819"),
        (DirectedCycle((1, 2, 3)), "D:123"),
    ],
)
def test_format_instruction(instruction, text):
    assert format_instruction(instruction) == text


def test_format_transcript_reparses(a3_text):
    t = parse_transcript(a3_text)
    text = format_transcript(t)
    assert text.startswith("source 10\n1. B8→9 (Copy 2) O8→2 (C2(10)98)")
    assert parse_transcript(text) == t


@pytest.mark.parametrize(
    "text",
    [
        "",
        "source 1\n2. S:1234",
        "source 1\n1. O1→2 (C123)",
        "source 1\n1. S:123",
        "source 1\n1. B1→2 (Copy 2) S:1234\n2. MC3 S:1234",
        "source 1\n1. B1→2 (Copy 2) S:1234\n2. MC2 S:1234\n3. MC2 S:1234",
        "source 1\n1. B1→2 (Copy 2) B2→3 (Copy 2) S:1234",
        "source 1\n1. MC2 S:1234",
        "source 1\n1. B1→2 (Copy 2) S:1234\n2. S:1234",
        "1. S:1234\nsource 1",
        "source 1\n1. S:1234 O1→2 (C123)",
        "source 1\n1. O1→2 S:1234",
        "source 1\n1. X1234",
        "source 1\nS:1234",
    ],
)
def test_parse_rejects(text):
    """Numbering, copy bookkeeping, terminals and unknown instructions are checked while parsing"""
    with pytest.raises(TranscriptError):
        parse_transcript(text)


def test_directed_cycle_terminal():
    """D: is accepted by default and refused under the strict grammar"""
    t = parse_transcript("source 1\n1. D:123")
    assert t.lines[0].instructions == (DirectedCycle((1, 2, 3)),)
    assert t.extended
    with pytest.raises(TranscriptError):
        parse_transcript("source 1\n1. D:123", strict=True)


@pytest.mark.parametrize("name", ["A3", "B1", "B7"])
def test_verify_bundled(name):
    verdict = verify_transcript(build_paper_graph(name), assets.load_transcript_asset(name))
    assert verdict.accepted
    assert str(verdict) == "accepted"


def test_verify_a3_from_source():
    """The A3 lines replay with 10 as a source; read as a sink its shortcuts lose their first arc"""
    G = build_paper_graph("A3")
    t = assets.load_transcript_asset("A3")
    assert verify_transcript(G, t, source=10).accepted
    verdict = verify_transcript(G, t, sink=True)
    assert not verdict.accepted
    assert verdict.failures[0].instruction == "S:(10)819"


def test_verify_unknown_vertices():
    """A transcript naming vertices the graph lacks is rejected before replay"""
    verdict = verify_transcript(wheel_graph(), assets.load_transcript_asset("A3"))
    assert not verdict.accepted
    assert verdict.failures[0].instruction == "vertices"


def test_verify_without_anchor():
    t = parse_transcript("1. S:1234")
    verdict = verify_transcript(complete_graph(4), t)
    assert [f.instruction for f in verdict.failures] == ["header"]


def test_verify_unreplayed_copy(a3_text):
    """A saved copy that no line resumes leaves that branch unrefuted"""
    first_line = "\n".join(line for line in a3_text.splitlines() if not line.startswith("2."))
    verdict = verify_transcript(build_paper_graph("A3"), parse_transcript(first_line))
    assert not verdict.accepted
    assert str(verdict) == "rejected: Copy 2: copy is never replayed"


def test_verify_shortcut_on_clique():
    """A shortcut needs a non-adjacent pair"""
    G = complete_graph(4)
    t = parse_transcript("source 1\n1. B2→3 (Copy 2) B2→4 (Copy 3) B3→4 (Copy 4) S:1234")
    verdict = verify_transcript(G, t)
    assert verdict.failures[0].reason == "the shortcut vertices induce a clique"


def test_verify_unforced_orientation():
    """An orientation the cited cycle does not force is rejected with its line"""
    G = complete_graph(4)
    t = parse_transcript("source 1\n1. O2→3 (C234) S:1234")
    verdict = verify_transcript(G, t)
    assert verdict.failures[0].line == 1
    assert verdict.failures[0].instruction == "O2→3 (C234)"


@pytest.mark.parametrize("name", ["W5", "A3", "B1"])
def test_emit_transcript(name):
    """A refutation found by the search replays as an accepted transcript"""
    G = build_paper_graph(name)
    t = emit_transcript(search_semi_transitive(G))
    assert verify_transcript(G, t).accepted
    assert parse_transcript(format_transcript(t)) == t


def test_emit_representable():
    with pytest.raises(TranscriptError):
        emit_transcript(search_semi_transitive(complete_graph(4)))


def test_mutations_rejected():
    """Every reversed arc or sequence of the A3 refutation is caught"""
    G = build_paper_graph("A3")
    t = assets.load_transcript_asset("A3")
    mutations = list(mutate_transcript(t))
    flips = [m for m in mutations if m.kind == "flip"]
    assert flips
    assert {m.kind for m in mutations} == {"flip", "swap"}
    for mutation in flips:
        assert not verify_transcript(G, mutation.transcript).accepted, mutation.description
