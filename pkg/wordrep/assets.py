"""Bundled graphs, orientations, transcripts and the deletion-case list.

Every file under the data directory is listed in MANIFEST with its sha256
digest; a file that is missing from the manifest or whose digest differs is
refused. The directory defaults to the package's ``data/`` and can be moved
with the WORDREP_ASSETS environment variable or Django setting.
"""
import hashlib
import logging
import os
from pathlib import Path
from typing import Dict, List, Tuple

from . import settings
from .codecs import parse_edge_list, parse_orientation, read_metadata
from .exceptions import AssetError, FormatError
from .graphs import Graph
from .orientation import PartialOrientation
from .proof import Transcript, parse_transcript

logger = logging.getLogger(__name__)

MANIFEST = "MANIFEST"
GRAPH_ORDERS = {
    "W5": 6,
    "H3": 10,
    "C": 19,
    "A1": 6,
    "A2": 9,
    "A3": 7,
    "A4": 8,
    "A5": 9,
    "B1": 7,
    "B2": 7,
    "B3": 8,
    "B4": 8,
    "B5": 8,
    "B6": 8,
    "B7": 9,
}
ORIENTED_GRAPHS = ("A1", "A2", "A4", "A5")
TRANSCRIPTS = ("A3", "B1", "B2", "B3", "B4", "B5", "B6", "B7", "B3-printed")


def data_dir() -> Path:
    return Path(os.environ.get("WORDREP_ASSETS") or settings.ASSETS)


def read_manifest(directory: Path) -> Dict[str, str]:
    path = directory / MANIFEST
    if not path.exists():
        raise AssetError(f"{path} does not exist.")
    digests = {}
    for line in path.read_text().splitlines():
        if not line.strip():
            continue
        digest, _, name = line.partition("  ")
        digests[name.strip()] = digest.strip()
    return digests


def verify_manifest(directory: Path = None) -> List[str]:
    """Names of every listed file whose digest differs or that is missing."""
    directory = directory or data_dir()
    problems = []
    for name, digest in read_manifest(directory).items():
        path = directory / name
        if not path.exists():
            problems.append(f"{name}: missing")
        elif hashlib.sha256(path.read_bytes()).hexdigest() != digest:
            problems.append(f"{name}: checksum mismatch")
    return problems


def read_asset(name: str) -> str:
    directory = data_dir()
    path = directory / name
    if not path.exists():
        raise AssetError(f"Asset {name} not found in {directory}.")
    expected = read_manifest(directory).get(name)
    if expected is None:
        raise AssetError(f"Asset {name} is not listed in {directory / MANIFEST}.")
    content = path.read_bytes()
    if hashlib.sha256(content).hexdigest() != expected:
        raise AssetError(f"Asset {name} does not match its checksum in {directory / MANIFEST}.")
    logger.debug(f"asset={name} loaded from {directory}")
    return content.decode("utf-8")


def parse_sides(text: str) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    left, bar, right = text.partition("|")
    if not bar:
        raise AssetError(f"Sides {text!r} are not of the form 'a b | c d'.")
    try:
        return tuple(int(v) for v in left.split()), tuple(int(v) for v in right.split())
    except ValueError:
        raise AssetError(f"Sides {text!r} contain a non-integer label.") from None


def load_graph_asset(name: str) -> Tuple[Graph, Dict[str, str]]:
    """The named graph and its metadata, after checking its order and clique sides."""
    if name not in GRAPH_ORDERS:
        raise AssetError(f"Unknown graph {name!r}; expected one of {', '.join(GRAPH_ORDERS)}.")
    text = read_asset(f"graphs/{name}.edges")
    try:
        G = parse_edge_list(text)
    except FormatError as e:
        raise AssetError(f"graphs/{name}.edges: {e}") from e
    metadata = read_metadata(text)
    if G.n != GRAPH_ORDERS[name]:
        raise AssetError(f"Graph {name} has {G.n} vertices, expected {GRAPH_ORDERS[name]}.")
    if "sides" in metadata:
        m_side, n_side = parse_sides(metadata["sides"])
        if sorted(m_side + n_side) != sorted(G.labels):
            raise AssetError(f"Sides of {name} do not partition its vertices.")
        for side in (m_side, n_side):
            if not G.is_clique(side):
                raise AssetError(f"Side {list(side)} of {name} is not a clique.")
    return G, metadata


def load_orientation_asset(name: str, G: Graph) -> PartialOrientation:
    if name not in ORIENTED_GRAPHS:
        raise AssetError(f"No orientation is bundled for {name!r}.")
    try:
        P = parse_orientation(G, read_asset(f"orientations/{name}.arcs"))
    except FormatError as e:
        raise AssetError(f"orientations/{name}.arcs: {e}") from e
    if not P.is_complete():
        missing = ", ".join(f"{u}-{v}" for u, v in P.unoriented())
        raise AssetError(f"Orientation of {name} leaves {missing} unoriented.")
    return P


def load_transcript_asset(name: str) -> Transcript:
    if name not in TRANSCRIPTS:
        raise AssetError(f"No transcript is bundled for {name!r}.")
    return parse_transcript(read_asset(f"transcripts/{name}.txt"), strict=True)


def load_case_lines() -> List[Tuple[int, str]]:
    """The non-comment lines of cases.txt with their line numbers."""
    lines = []
    for number, line in enumerate(read_asset("cases.txt").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if line:
            lines.append((number, line))
    return lines
