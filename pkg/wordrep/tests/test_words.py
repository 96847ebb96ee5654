"""Tests for words, alternation and the uniform word search."""

import pytest

from ..exceptions import FormatError, SearchLimitError, WordrepError
from ..family import k1_kn, k1_kn_word
from ..graphs import build_graph, complete_graph, cycle_graph, path_graph, wheel_graph
from ..words import alternates, find_uniform_word, format_word, parse_word, represents, represents_with_reason


def test_parse_word():
    """Single digits are juxtaposed, longer labels go in parentheses"""
    assert parse_word("1123(10)") == (1, 1, 2, 3, 10)
    assert format_word((1, 1, 2, 3, 10)) == "1123(10)"
    assert parse_word("(0)") == (0,)


@pytest.mark.parametrize("text", ["12a", "1(2", "(10", "1 2"])
def test_parse_word_rejects(text):
    with pytest.raises(FormatError):
        parse_word(text)


@pytest.mark.parametrize(
    "word,x,y,expected",
    [("1212", 1, 2, True), ("1221", 1, 2, False), ("13243", 1, 2, True), ("3", 1, 2, True), ("113", 1, 3, False)],
)
def test_alternates(word, x, y, expected):
    assert alternates(parse_word(word), x, y) is expected


def test_alternates_same_letter():
    with pytest.raises(WordrepError):
        alternates((1, 2), 1, 1)


def test_represents_path():
    """1213 represents the path 1-2-3"""
    assert represents(parse_word("1213"), path_graph(3))
    ok, reason = represents_with_reason(parse_word("123"), path_graph(3))
    assert not ok
    assert reason == "1 and 3 alternate but are not adjacent"


@pytest.mark.parametrize(
    "word,reason",
    [
        ("121", "vertex 3 does not occur in the word"),
        ("12134", "letter 4 is not a vertex of the graph"),
        ("1123", "1 and 2 are adjacent but do not alternate"),
    ],
)
def test_represents_with_reason(word, reason):
    assert represents_with_reason(parse_word(word), path_graph(3)) == (False, reason)


@pytest.mark.parametrize("n", [1, 2, 5, 8])
def test_k1_kn_word(n):
    """An isolated vertex plus a clique is represented by the doubled isolated letter and a permutation"""
    assert k1_kn_word(n) == (1, 1) + tuple(range(2, n + 2))
    assert represents(k1_kn_word(n), k1_kn(n))


@pytest.mark.parametrize(
    "G,k",
    [(complete_graph(4), 1), (cycle_graph(4), 2), (cycle_graph(5), 2), (path_graph(4), 2)],
)
def test_find_uniform_word(G, k):
    """The search returns the least uniformity and a word that represents the graph"""
    w = find_uniform_word(G, 3)
    assert w is not None
    assert len(w) == k * G.n
    assert represents(w, G)


def test_find_uniform_word_misses_on_wheel():
    """W5 has no representing word at all"""
    assert find_uniform_word(wheel_graph(), 3) is None


def test_find_uniform_word_limits():
    with pytest.raises(SearchLimitError):
        find_uniform_word(build_graph(8, []), 2)
    with pytest.raises(SearchLimitError):
        find_uniform_word(path_graph(3), 4)
