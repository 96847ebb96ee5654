"""Words over vertex labels and the alternation relation they induce."""
import logging
import re
from itertools import combinations
from typing import Optional, Sequence, Tuple

from .exceptions import FormatError, SearchLimitError, WordrepError
from .graphs import Graph

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]

WORD_SEARCH_MAX_VERTICES = 7
WORD_SEARCH_MAX_UNIFORMITY = 3
LETTER_RE = re.compile(r"\((\d+)\)|(\d)")


def parse_word(text: str) -> Word:
    """Read "1123(10)": single digits juxtaposed, longer labels in parentheses."""
    text = text.strip()
    letters = []
    position = 0
    for match in LETTER_RE.finditer(text):
        if match.start() != position:
            raise FormatError(f"Unexpected character {text[position]!r} in word {text!r}.")
        letters.append(int(match.group(1) or match.group(2)))
        position = match.end()
    if position != len(text):
        raise FormatError(f"Unexpected character {text[position]!r} in word {text!r}.")
    return tuple(letters)


def format_letter(label: int) -> str:
    return str(label) if 0 <= label <= 9 else f"({label})"


def format_word(w: Sequence[int]) -> str:
    return "".join(format_letter(letter) for letter in w)


def alternates(w: Sequence[int], x: int, y: int) -> bool:
    if x == y:
        raise WordrepError(f"Alternation needs two distinct letters, got {x} twice.")
    previous = None
    for letter in w:
        if letter == x or letter == y:
            if letter == previous:
                return False
            previous = letter
    return True


def represents_with_reason(w: Sequence[int], G: Graph) -> Tuple[bool, Optional[str]]:
    """Whether w represents G, with the first violation found when it does not."""
    vertices = set(G.labels)
    present = set(w)
    for label in G.labels:
        if label not in present:
            return False, f"vertex {label} does not occur in the word"
    stray = sorted(present - vertices)
    if stray:
        return False, f"letter {stray[0]} is not a vertex of the graph"
    for x, y in combinations(G.labels, 2):
        alternating = alternates(w, x, y)
        if alternating and not G.has_edge(x, y):
            return False, f"{x} and {y} alternate but are not adjacent"
        if not alternating and G.has_edge(x, y):
            return False, f"{x} and {y} are adjacent but do not alternate"
    return True, None


def represents(w: Sequence[int], G: Graph) -> bool:
    return represents_with_reason(w, G)[0]


def find_uniform_word(G: Graph, k_max: int) -> Optional[Word]:
    """Backtracking search for a k-uniform representing word, k = 1..k_max.

    The first letter is fixed to the first vertex: a cyclic shift of a uniform
    representant represents the same graph. A miss proves nothing.
    """
    if G.n > WORD_SEARCH_MAX_VERTICES or not 1 <= k_max <= WORD_SEARCH_MAX_UNIFORMITY:
        raise SearchLimitError(
            f"Uniform word search is limited to {WORD_SEARCH_MAX_VERTICES} vertices "
            f"and k <= {WORD_SEARCH_MAX_UNIFORMITY}, got n={G.n} k={k_max}."
        )
    n = G.n
    adj = G.adj
    non_edges = [(i, j) for i, j in combinations(range(n), 2) if not adj[i] >> j & 1]
    for k in range(1, k_max + 1):
        word = _uniform_word(n, adj, non_edges, k)
        if word is not None:
            logger.debug(f"Graph.n={n} found {k}-uniform word")
            return tuple(G.labels[i] for i in word)
    return None


def _uniform_word(n, adj, non_edges, k):
    length = n * k
    count = [0] * n
    last = [-1] * n
    broken = set()
    word = []

    def place(i: int) -> Optional[list]:
        # a second i with no j since the previous i breaks the pair i, j
        newly = []
        if last[i] >= 0:
            for j in range(n):
                if j != i and last[j] < last[i]:
                    if adj[i] >> j & 1:
                        return None
                    pair = (min(i, j), max(i, j))
                    if pair not in broken:
                        newly.append(pair)
        return newly

    def extend() -> bool:
        if len(word) == length:
            return True
        for i in (range(n) if word else (0,)):
            if count[i] == k:
                continue
            newly = place(i)
            if newly is None:
                continue
            saved = last[i]
            broken.update(newly)
            count[i] += 1
            last[i] = len(word)
            word.append(i)
            if _unbroken_finished(non_edges, broken, count, k) or not extend():
                word.pop()
                last[i] = saved
                count[i] -= 1
                broken.difference_update(newly)
                continue
            return True
        return False

    return list(word) if extend() else None


def _unbroken_finished(non_edges, broken, count, k) -> bool:
    """True when some non-adjacent pair is complete and still alternates."""
    return any(
        count[i] == k and count[j] == k and (i, j) not in broken for i, j in non_edges
    )
