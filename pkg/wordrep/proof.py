"""Refutation transcripts: the B / MC / O / S proof language.

A transcript fixes one vertex as a source (or sink) and then, line by line,
orients edges that are forced, branches on an edge by saving the reversed
state as a numbered copy, and ends every line with a shortcut that rules the
current state out. Line 1 starts from the anchored state; every later line
resumes a saved copy ("MCk a→b"). Lines look like::

    1. B8→9 (Copy 2) O8→2 (C2(10)98) O1→9 O8→1 (C1948) S:(10)819
    2. MC2 9→8 O2→8 (C2(10)98) S:(10)918

Labels above 9 are written in parentheses. "D:seq" is an extension used only
by emitted transcripts: it ends a line with a directed cycle instead of a
shortcut, and ``parse_transcript(..., strict=True)`` rejects it.
"""
import logging
import re
from dataclasses import dataclass, field, replace
from typing import Iterator, List, NamedTuple, Optional, Tuple, Union

from .exceptions import GraphError, TranscriptError
from .graphs import Graph
from .orientation import Certificate, RefutationLog, RefutationNode, _direction, anchored
from .words import format_word

logger = logging.getLogger(__name__)

Arc = Tuple[int, int]
ARROW = "→"
_VERTEX = r"(?:\d|\(\d+\))"
_ARC = rf"({_VERTEX})\s*{ARROW}\s*({_VERTEX})"
_SEQUENCE = rf"((?:{_VERTEX})+)"

MOVE_RE = re.compile(rf"MC\s*(\d+)(?:\s*{_ARC})?")
BRANCH_RE = re.compile(rf"B\s*{_ARC}\s*\(\s*Copy\s*(\d+)\s*\)")
ORIENT_RE = re.compile(rf"O\s*{_ARC}(?:\s*\(\s*C\s*{_SEQUENCE}\s*\))?")
SHORTCUT_RE = re.compile(rf"S\s*:\s*{_SEQUENCE}\.?")
CYCLE_RE = re.compile(rf"D\s*:\s*{_SEQUENCE}\.?")
LINE_RE = re.compile(r"^\s*(\d+)\.\s*(.*)$")
HEADER_RE = re.compile(r"^\s*(source|sink)\s+(\d+)\s*$")
VERTEX_RE = re.compile(r"\((\d+)\)|(\d)")


@dataclass(frozen=True)
class Branch:
    arc: Arc
    copy: int


@dataclass(frozen=True)
class Orient1:
    arc: Arc
    cycle: Tuple[int, ...]


@dataclass(frozen=True)
class Orient2:
    arcs: Tuple[Arc, Arc]
    cycle: Tuple[int, ...]


@dataclass(frozen=True)
class Shortcut:
    sequence: Tuple[int, ...]


@dataclass(frozen=True)
class DirectedCycle:
    sequence: Tuple[int, ...]


Instruction = Union[Branch, Orient1, Orient2, Shortcut, DirectedCycle]
TERMINALS = (Shortcut, DirectedCycle)


@dataclass(frozen=True)
class Move:
    copy: int
    arc: Optional[Arc] = None


@dataclass(frozen=True)
class Line:
    number: int
    move: Optional[Move]
    instructions: Tuple[Instruction, ...]


@dataclass(frozen=True)
class Transcript:
    source_vertex: Optional[int]
    lines: Tuple[Line, ...]
    sink: bool = False

    @property
    def extended(self) -> bool:
        """True when some line ends in the directed-cycle form."""
        return any(isinstance(line.instructions[-1], DirectedCycle) for line in self.lines)

    def vertices(self) -> set:
        found = set()
        if self.source_vertex is not None:
            found.add(self.source_vertex)
        for line in self.lines:
            if line.move and line.move.arc:
                found.update(line.move.arc)
            for instruction in line.instructions:
                found.update(_instruction_vertices(instruction))
        return found


def _instruction_vertices(instruction: Instruction):
    if isinstance(instruction, Branch):
        return instruction.arc
    if isinstance(instruction, Orient1):
        return instruction.arc + instruction.cycle
    if isinstance(instruction, Orient2):
        return instruction.arcs[0] + instruction.arcs[1] + instruction.cycle
    return instruction.sequence


class Failure(NamedTuple):
    line: Optional[int]
    instruction: str
    reason: str


@dataclass
class Verdict:
    failures: List[Failure] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return not self.failures

    def __str__(self):
        if self.accepted:
            return "accepted"
        return "rejected: " + "; ".join(
            f"line {f.line}: {f.instruction}: {f.reason}" if f.line else f"{f.instruction}: {f.reason}"
            for f in self.failures
        )


def _vertex_sequence(text: str, number: int) -> Tuple[int, ...]:
    vertices = tuple(int(m.group(1) or m.group(2)) for m in VERTEX_RE.finditer(text))
    if "".join(m.group(0) for m in VERTEX_RE.finditer(text)) != text:
        raise TranscriptError(f"Line {number}: malformed vertex token in {text!r}.")
    return vertices


def _vertex(text: str, number: int) -> int:
    return _vertex_sequence(text, number)[0]


def _normalize(text: str) -> str:
    text = text.replace("$\\rightarrow$", ARROW).replace("\\rightarrow", ARROW).replace("->", ARROW)
    return text.replace("$", "")


def _parse_body(body: str, number: int, strict: bool):
    """Split one line's body into an optional move and its instructions."""
    position = 0
    move = None
    instructions: List[Instruction] = []
    open_orient: Optional[Arc] = None

    def skip(position):
        while position < len(body) and body[position].isspace():
            position += 1
        return position

    position = skip(position)
    match = MOVE_RE.match(body, position)
    if match:
        arc = None
        if match.group(2):
            arc = (_vertex(match.group(2), number), _vertex(match.group(3), number))
        move = Move(int(match.group(1)), arc)
        position = skip(match.end())

    while position < len(body):
        if instructions and isinstance(instructions[-1], TERMINALS):
            raise TranscriptError(f"Line {number}: instructions after the terminal claim.")
        match = ORIENT_RE.match(body, position)
        if match:
            arc = (_vertex(match.group(1), number), _vertex(match.group(2), number))
            if match.group(3) is None:
                if open_orient is not None:
                    raise TranscriptError(f"Line {number}: three orientations share one cycle.")
                open_orient = arc
            else:
                cycle = _vertex_sequence(match.group(3), number)
                if open_orient is not None:
                    instructions.append(Orient2((open_orient, arc), cycle))
                    open_orient = None
                else:
                    instructions.append(Orient1(arc, cycle))
            position = skip(match.end())
            continue
        if open_orient is not None:
            raise TranscriptError(f"Line {number}: orientation {open_orient[0]}{ARROW}{open_orient[1]} cites no cycle.")
        match = BRANCH_RE.match(body, position)
        if match:
            arc = (_vertex(match.group(1), number), _vertex(match.group(2), number))
            instructions.append(Branch(arc, int(match.group(3))))
            position = skip(match.end())
            continue
        match = SHORTCUT_RE.match(body, position)
        if match:
            sequence = _vertex_sequence(match.group(1), number)
            if len(sequence) < 4:
                raise TranscriptError(f"Line {number}: shortcut {match.group(0)!r} needs at least 4 vertices.")
            instructions.append(Shortcut(sequence))
            position = skip(match.end())
            continue
        match = CYCLE_RE.match(body, position)
        if match:
            if strict:
                raise TranscriptError(f"Line {number}: 'D:' terminals are not part of the strict grammar.")
            sequence = _vertex_sequence(match.group(1), number)
            if len(sequence) < 3:
                raise TranscriptError(f"Line {number}: directed cycle {match.group(0)!r} is too short.")
            instructions.append(DirectedCycle(sequence))
            position = skip(match.end())
            continue
        raise TranscriptError(f"Line {number}: unknown instruction at {body[position:position + 12]!r}.")

    if open_orient is not None:
        raise TranscriptError(f"Line {number}: orientation {open_orient[0]}{ARROW}{open_orient[1]} cites no cycle.")
    if not instructions or not isinstance(instructions[-1], TERMINALS):
        raise TranscriptError(f"Line {number}: line does not end with a shortcut.")
    return move, tuple(instructions)


def parse_transcript(text: str, strict: bool = False) -> Transcript:
    source_vertex = None
    sink = False
    raw_lines: List[List] = []
    for text_line in _normalize(text).splitlines():
        text_line = text_line.split("#", 1)[0].strip()
        if not text_line:
            continue
        header = HEADER_RE.match(text_line)
        if header:
            if raw_lines or source_vertex is not None:
                raise TranscriptError("The source/sink header must come first and only once.")
            sink = header.group(1) == "sink"
            source_vertex = int(header.group(2))
            continue
        numbered = LINE_RE.match(text_line)
        if numbered:
            raw_lines.append([int(numbered.group(1)), numbered.group(2)])
        elif raw_lines:
            raw_lines[-1][1] += " " + text_line
        else:
            raise TranscriptError(f"Expected a numbered line, got {text_line!r}.")
    if not raw_lines:
        raise TranscriptError("Transcript has no lines.")

    lines = []
    created, consumed = set(), set()
    for expected, (number, body) in enumerate(raw_lines, start=1):
        if number != expected:
            raise TranscriptError(f"Line {number} found where line {expected} was expected.")
        move, instructions = _parse_body(body, number, strict)
        if number == 1 and move is not None:
            raise TranscriptError("Line 1 cannot move to a copy.")
        if number > 1:
            if move is None:
                raise TranscriptError(f"Line {number} does not move to a copy.")
            if move.copy not in created:
                raise TranscriptError(f"Line {number}: copy {move.copy} has not been created.")
            if move.copy in consumed:
                raise TranscriptError(f"Line {number}: copy {move.copy} is consumed twice.")
            consumed.add(move.copy)
        for instruction in instructions:
            if isinstance(instruction, Branch):
                if instruction.copy in created:
                    raise TranscriptError(f"Line {number}: copy {instruction.copy} is created twice.")
                created.add(instruction.copy)
        lines.append(Line(number, move, instructions))
    return Transcript(source_vertex, tuple(lines), sink)


def _arc_text(arc: Arc) -> str:
    return f"{format_word(arc[:1])}{ARROW}{format_word(arc[1:])}"


def format_instruction(instruction: Instruction) -> str:
    if isinstance(instruction, Branch):
        return f"B{_arc_text(instruction.arc)} (Copy {instruction.copy})"
    if isinstance(instruction, Orient1):
        return f"O{_arc_text(instruction.arc)} (C{format_word(instruction.cycle)})"
    if isinstance(instruction, Orient2):
        first, second = instruction.arcs
        return f"O{_arc_text(first)} O{_arc_text(second)} (C{format_word(instruction.cycle)})"
    if isinstance(instruction, Shortcut):
        return f"S:{format_word(instruction.sequence)}"
    return f"D:{format_word(instruction.sequence)}"


def format_line(line: Line) -> str:
    parts = []
    if line.move is not None:
        move = f"MC{line.move.copy}"
        if line.move.arc is not None:
            move += f" {_arc_text(line.move.arc)}"
        parts.append(move)
    parts += [format_instruction(instruction) for instruction in line.instructions]
    return f"{line.number}. " + " ".join(parts)


def format_transcript(t: Transcript) -> str:
    out = []
    if t.source_vertex is not None:
        out.append(f"{'sink' if t.sink else 'source'} {t.source_vertex}")
    out += [format_line(line) for line in t.lines]
    return "\n".join(out) + "\n"


class _Replay:
    """Stateful replay of a transcript over a host graph."""

    def __init__(self, G: Graph):
        self.G = G
        self.copies = {}
        self.created = set()

    def idx(self, label: int) -> int:
        return self.G.index(label)

    def state(self, out, u: int, v: int) -> int:
        return _direction(out, self.idx(u), self.idx(v))

    def set_arc(self, out, u: int, v: int):
        i, j = self.idx(u), self.idx(v)
        out[j] &= ~(1 << i)
        out[i] |= 1 << j

    def cycle_problem(self, cycle) -> Optional[str]:
        if len(cycle) < 3:
            return f"cycle C{format_word(cycle)} has fewer than 3 vertices"
        if len(set(cycle)) != len(cycle):
            return f"cycle C{format_word(cycle)} repeats a vertex"
        m = len(cycle)
        for k in range(m):
            u, v = cycle[k], cycle[(k + 1) % m]
            if not self.G.has_edge(u, v):
                return f"{u}-{v} on cycle C{format_word(cycle)} is not an edge"
        return None

    def position(self, cycle, arc) -> Optional[Tuple[int, int]]:
        """Index of the cycle edge carrying arc and +1/-1 for its traversal sense."""
        m = len(cycle)
        for k in range(m):
            pair = (cycle[k], cycle[(k + 1) % m])
            if pair == arc:
                return k, 1
            if pair == arc[::-1]:
                return k, -1
        return None

    def senses(self, out, cycle) -> List[int]:
        m = len(cycle)
        return [self.state(out, cycle[k], cycle[(k + 1) % m]) for k in range(m)]

    def contradictory(self, out, cycle) -> bool:
        """A directed cycle, or m-1 agreeing edges on a non-clique cycle with m >= 4."""
        senses = self.senses(out, cycle)
        m = len(cycle)
        rule = m >= 4 and not self.G.is_clique(cycle)
        for d in (1, -1):
            agreeing = senses.count(d)
            if agreeing == m or (rule and agreeing >= m - 1):
                return True
        return False

    def apply(self, out, instruction: Instruction) -> Optional[str]:
        handler = getattr(self, f"apply_{type(instruction).__name__.lower()}")
        return handler(out, instruction)

    def apply_branch(self, out, instruction: Branch) -> Optional[str]:
        a, b = instruction.arc
        if not self.G.has_edge(a, b):
            return f"{a}-{b} is not an edge"
        if self.state(out, a, b):
            return f"edge {a}-{b} is already oriented"
        if instruction.copy in self.created:
            return f"copy {instruction.copy} already exists"
        saved = list(out)
        self.set_arc(saved, b, a)
        self.copies[instruction.copy] = (saved, (b, a))
        self.created.add(instruction.copy)
        self.set_arc(out, a, b)
        return None

    def apply_orient1(self, out, instruction: Orient1) -> Optional[str]:
        a, b = instruction.arc
        cycle = instruction.cycle
        problem = self.cycle_problem(cycle)
        if problem:
            return problem
        if self.position(cycle, (a, b)) is None:
            return f"{a}-{b} is not an edge of cycle C{format_word(cycle)}"
        current = self.state(out, a, b)
        if current == 1:
            return None
        if current == -1:
            return f"edge is already oriented {b}{ARROW}{a}"
        if self.contradictory(out, cycle):
            return f"cycle C{format_word(cycle)} is already contradictory"
        trial = list(out)
        self.set_arc(trial, b, a)
        if not self.contradictory(trial, cycle):
            return f"{b}{ARROW}{a} is not ruled out by cycle C{format_word(cycle)}"
        self.set_arc(out, a, b)
        return None

    def apply_orient2(self, out, instruction: Orient2) -> Optional[str]:
        cycle = instruction.cycle
        problem = self.cycle_problem(cycle)
        if problem:
            return problem
        m = len(cycle)
        if m < 4:
            return f"cycle C{format_word(cycle)} is too short for a two-edge step"
        if self.G.is_clique(cycle):
            return f"cycle C{format_word(cycle)} induces a clique"
        placed = []
        for arc in instruction.arcs:
            found = self.position(cycle, arc)
            if found is None:
                return f"{arc[0]}-{arc[1]} is not an edge of cycle C{format_word(cycle)}"
            if self.state(out, *arc) == -1:
                return f"edge is already oriented {arc[1]}{ARROW}{arc[0]}"
            placed.append(found)
        if placed[0][0] == placed[1][0]:
            return "both orientations name the same edge"
        if placed[0][1] != placed[1][1]:
            return "the two edges do not point the same way around the cycle"
        senses = self.senses(out, cycle)
        others = [senses[k] for k in range(m) if k not in (placed[0][0], placed[1][0])]
        if any(s != -placed[0][1] for s in others):
            return f"the other {m - 2} edges of C{format_word(cycle)} are not oriented the opposite way"
        for arc in instruction.arcs:
            self.set_arc(out, *arc)
        return None

    def apply_shortcut(self, out, instruction: Shortcut) -> Optional[str]:
        sequence = instruction.sequence
        if len(set(sequence)) != len(sequence):
            return "shortcut repeats a vertex"
        for u, v in zip(sequence, sequence[1:]):
            if self.state(out, u, v) != 1:
                return f"{u}{ARROW}{v} is not oriented"
        first, last = sequence[0], sequence[-1]
        if self.state(out, first, last) != 1:
            return f"shortcutting edge {first}{ARROW}{last} is not oriented"
        for a in range(len(sequence)):
            for b in range(a + 1, len(sequence)):
                if not self.G.has_edge(sequence[a], sequence[b]):
                    return None
        return "the shortcut vertices induce a clique"

    def apply_directedcycle(self, out, instruction: DirectedCycle) -> Optional[str]:
        sequence = instruction.sequence
        if len(set(sequence)) != len(sequence):
            return "directed cycle repeats a vertex"
        for u, v in zip(sequence, sequence[1:] + sequence[:1]):
            if self.state(out, u, v) != 1:
                return f"{u}{ARROW}{v} is not oriented"
        return None


def verify_transcript(G: Graph, t: Transcript, source: Optional[int] = None, sink: Optional[bool] = None) -> Verdict:
    """Replay t on G; `source` and `sink` override the transcript header."""
    verdict = Verdict()
    anchor = source if source is not None else t.source_vertex
    sink = t.sink if sink is None else sink
    if anchor is None:
        verdict.failures.append(Failure(None, "header", "no source or sink vertex given"))
        return verdict
    unknown = sorted(v for v in t.vertices() | {anchor} if v not in G.labels)
    if unknown:
        verdict.failures.append(Failure(None, "vertices", f"{unknown} are not vertices of the graph"))
        return verdict

    replay = _Replay(G)
    root = list(anchored(G, anchor, sink=sink).out)
    for line in t.lines:
        if line.move is None:
            out = list(root)
        else:
            saved = replay.copies.pop(line.move.copy, None)
            if saved is None:
                verdict.failures.append(Failure(line.number, f"MC{line.move.copy}", "copy was never saved"))
                continue
            out, arc = saved
            if line.move.arc is not None and line.move.arc != arc:
                verdict.failures.append(
                    Failure(line.number, f"MC{line.move.copy}", f"copy {line.move.copy} holds {_arc_text(arc)}")
                )
                continue
        for instruction in line.instructions:
            try:
                reason = replay.apply(out, instruction)
            except GraphError as e:
                reason = str(e)
            if reason:
                verdict.failures.append(Failure(line.number, format_instruction(instruction), reason))
                break
    for copy in sorted(replay.copies):
        verdict.failures.append(Failure(None, f"Copy {copy}", "copy is never replayed"))
    logger.debug(f"Graph.n={G.n} transcript lines={len(t.lines)} failures={len(verdict.failures)}")
    return verdict


def _terminal(node: RefutationNode) -> Instruction:
    conflict = node.conflict
    if conflict.kind == "shortcut":
        return Shortcut(conflict.witness.path)
    return DirectedCycle(conflict.cycle)


def emit_transcript(log: Union[RefutationLog, Certificate]) -> Transcript:
    if isinstance(log, Certificate):
        if log.refutation is None:
            raise TranscriptError("The graph has a semi-transitive orientation; there is nothing to refute.")
        log = log.refutation
    lines: List[Line] = []
    pending = []
    next_copy = 2

    def run(node: RefutationNode) -> List[Instruction]:
        nonlocal next_copy
        instructions: List[Instruction] = []
        while True:
            for step in node.steps:
                if len(step.arcs) == 1:
                    instructions.append(Orient1(step.arcs[0], step.cycle))
                else:
                    instructions.append(Orient2(step.arcs, step.cycle))
            if node.conflict is not None:
                instructions.append(_terminal(node))
                return instructions
            a, b = node.branch
            instructions.append(Branch((a, b), next_copy))
            pending.append((next_copy, node.children[1], (b, a)))
            next_copy += 1
            node = node.children[0]

    lines.append(Line(1, None, tuple(run(log.root))))
    while pending:
        copy, node, arc = pending.pop()
        lines.append(Line(len(lines) + 1, Move(copy, arc), tuple(run(node))))
    return Transcript(log.anchor, tuple(lines), log.sink)


class Mutation(NamedTuple):
    kind: str
    description: str
    transcript: Transcript


def _with_instruction(t: Transcript, line_index: int, position: int, instruction) -> Transcript:
    line = t.lines[line_index]
    instructions = line.instructions[:position] + (instruction,) + line.instructions[position + 1 :]
    lines = t.lines[:line_index] + (replace(line, instructions=instructions),) + t.lines[line_index + 1 :]
    return replace(t, lines=lines)


def _swapped(cycle: Tuple[int, ...], k: int) -> Tuple[int, ...]:
    swapped = list(cycle)
    swapped[k], swapped[k + 1] = swapped[k + 1], swapped[k]
    return tuple(swapped)


def mutate_transcript(t: Transcript) -> Iterator[Mutation]:
    """Single-instruction mutations: reversed arcs and sequences ("flip") and
    two neighbouring cycle vertices exchanged ("swap")."""
    for li, line in enumerate(t.lines):
        where = f"line {line.number}"
        if line.move is not None and line.move.arc is not None:
            moved = replace(line, move=replace(line.move, arc=line.move.arc[::-1]))
            lines = t.lines[:li] + (moved,) + t.lines[li + 1 :]
            yield Mutation("flip", f"{where}: reminder of MC{line.move.copy} reversed", replace(t, lines=lines))
        for pi, instruction in enumerate(line.instructions):
            text = format_instruction(instruction)
            if isinstance(instruction, Branch):
                flipped = replace(instruction, arc=instruction.arc[::-1])
                yield Mutation("flip", f"{where}: {text} reversed", _with_instruction(t, li, pi, flipped))
            elif isinstance(instruction, Orient1):
                flipped = replace(instruction, arc=instruction.arc[::-1])
                yield Mutation("flip", f"{where}: {text} reversed", _with_instruction(t, li, pi, flipped))
            elif isinstance(instruction, Orient2):
                for which in (0, 1):
                    arcs = list(instruction.arcs)
                    arcs[which] = arcs[which][::-1]
                    flipped = replace(instruction, arcs=tuple(arcs))
                    yield Mutation(
                        "flip", f"{where}: {text} edge {which + 1} reversed", _with_instruction(t, li, pi, flipped)
                    )
            else:
                flipped = replace(instruction, sequence=instruction.sequence[::-1])
                yield Mutation("flip", f"{where}: {text} reversed", _with_instruction(t, li, pi, flipped))
            # on a triangle an exchange only reverses the cycle
            if isinstance(instruction, (Orient1, Orient2)) and len(instruction.cycle) > 3:
                for k in range(len(instruction.cycle) - 1):
                    swapped = replace(instruction, cycle=_swapped(instruction.cycle, k))
                    yield Mutation(
                        "swap", f"{where}: {text} cycle positions {k + 1},{k + 2} exchanged",
                        _with_instruction(t, li, pi, swapped),
                    )
