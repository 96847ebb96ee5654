"""Shared pieces of the wordrep management commands.

Graph arguments are a path, "-" for standard input, or "paper:NAME" for a
bundled graph. Transcript arguments accept "paper:NAME" as well.
"""
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Tuple

from django.core.management.base import CommandError

from . import assets, settings
from .codecs import load_graph
from .exceptions import WordrepError
from .graphs import Graph
from .proof import Transcript, parse_transcript
from .reports import RunReport

logger = logging.getLogger(__name__)

PAPER_PREFIX = "paper:"


def add_common_arguments(parser):
    parser.add_argument("--json", action="store_true", help="Write the machine-readable report.")
    parser.add_argument(
        "--deterministic",
        action="store_true",
        default=settings.DETERMINISTIC,
        help="One worker, no timings or timestamps.",
    )
    parser.add_argument("--threads", type=int, default=settings.THREADS, help="Worker processes (default: all cores).")


def add_graph_argument(parser, name: str = "graph"):
    parser.add_argument(name, help='Edge list or graph6 file, "-" for stdin, or paper:NAME.')
    parser.add_argument("--format", choices=("edges", "graph6"), help="Input format (default: detected).")


def resolve_threads(options) -> int:
    if options.get("deterministic"):
        return 1
    threads = options.get("threads")
    if threads is not None and threads < 1:
        raise CommandError("--threads must be positive.", returncode=2)
    return threads or os.cpu_count() or 1


def read_text(argument: str) -> str:
    if argument == "-":
        return sys.stdin.read()
    path = Path(argument)
    if not path.exists():
        raise CommandError(f"{argument} does not exist.", returncode=2)
    return path.read_text()


def read_graph(argument: str, fmt: Optional[str] = None) -> Tuple[Graph, str]:
    """The graph an argument names, and a display name for it."""
    try:
        if argument.startswith(PAPER_PREFIX):
            name = argument[len(PAPER_PREFIX) :]
            return assets.load_graph_asset(name)[0], name
        return load_graph(read_text(argument), fmt), argument
    except WordrepError as e:
        raise CommandError(str(e), returncode=2) from e


def read_transcript(argument: str) -> Transcript:
    try:
        if argument.startswith(PAPER_PREFIX):
            return assets.load_transcript_asset(argument[len(PAPER_PREFIX) :])
        return parse_transcript(read_text(argument))
    except WordrepError as e:
        raise CommandError(str(e), returncode=2) from e


def write_text(argument: str, text: str):
    Path(argument).write_text(text)
    logger.info(f"wrote {argument}")


def emit(command, report: RunReport, options):
    """Write the report to the command's stdout; a failed run exits with status 1."""
    if report.finished_at is None:
        report.finish()
    command.stdout.write(report.to_json() if options.get("json") else report.to_text(), ending="")
    if not report.passed:
        raise CommandError(f"{report.command}: {report.status}", returncode=1)
