"""Tests for the wordrep management commands."""
import json
from io import StringIO

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from .. import __main__ as console, models
from ..assets import parse_sides
from ..codecs import parse_edge_list, read_metadata
from ..family import FamilyGraph, validate_km_kn

K4 = "4 6\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n"
P3 = "3 2\n1 2\n2 3\n"
C4 = "4 4\n1 2\n2 3\n3 4\n1 4\n"


def run_command(name, *args, **options):
    out = StringIO()
    call_command(name, *args, stdout=out, stderr=StringIO(), **options)
    return out.getvalue()


def run_failing(name, *args, **options):
    with pytest.raises(CommandError) as excinfo:
        call_command(name, *args, stdout=StringIO(), stderr=StringIO(), **options)
    return excinfo.value


@pytest.fixture
def graph_file(tmp_path):
    def write(text, name="graph.edges"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def test_check_non_representable():
    """W5 is refuted and the run still passes without --expect."""
    out = run_command("wordrep_check", "paper:W5")
    assert out.startswith("wordrep check W5\n")
    assert "[passed] verdict" in out
    assert "non-word-representable" in out


def test_check_json(graph_file):
    """The JSON report carries the verdict data."""
    out = run_command("wordrep_check", graph_file(K4), json=True, deterministic=True)
    report = json.loads(out)
    assert report["status"] == "passed"
    assert report["items"][0]["data"] == {"representable": True, "vertices": 4, "edges": 6}
    assert "started_at" not in report


def test_check_expect_mismatch():
    """A verdict that contradicts --expect exits with status 1."""
    error = run_failing("wordrep_check", "paper:W5", expect="representable")
    assert error.returncode == 1


def test_check_missing_file(tmp_path):
    error = run_failing("wordrep_check", str(tmp_path / "missing.edges"))
    assert error.returncode == 2


def test_check_unknown_source(graph_file):
    error = run_failing("wordrep_check", graph_file(K4), source=9)
    assert error.returncode == 2


def test_check_writes_certificate(tmp_path):
    """The refutation written for W5 verifies from the file."""
    path = tmp_path / "W5.txt"
    run_command("wordrep_check", "paper:W5", certificate=str(path))
    out = run_command("wordrep_proof", "verify", "paper:W5", str(path))
    assert "[passed] verdict" in out


def test_check_naive(graph_file):
    out = run_command("wordrep_check", graph_file(C4), naive=True, expect="representable")
    assert "exhaustive enumeration" in out


def test_word_represents(graph_file):
    out = run_command("wordrep_word", graph_file(P3), "1213")
    assert "[passed] represents" in out


def test_word_rejected(graph_file):
    """A word that does not represent the graph exits with status 1."""
    error = run_failing("wordrep_word", graph_file(P3), "123")
    assert error.returncode == 1


def test_word_find(graph_file):
    report = json.loads(run_command("wordrep_word", graph_file(K4), find=2, json=True))
    assert sorted(report["items"][0]["data"]["word"]) == ["1", "2", "3", "4"]


def test_word_needs_argument(graph_file):
    error = run_failing("wordrep_word", graph_file(P3))
    assert error.returncode == 2


def test_orient_semi_transitive(graph_file):
    out = run_command("wordrep_orient", graph_file(K4), graph_file("1>2 1>3 1>4\n2>3 2>4\n3>4\n", "K4.arcs"))
    assert "[passed] semi-transitive" in out


def test_orient_shortcut(graph_file):
    """The path 1234 with the arc 1>4 is a shortcut."""
    error = run_failing("wordrep_orient", graph_file(C4), graph_file("1>2\n2>3\n3>4\n1>4\n", "C4.arcs"))
    assert error.returncode == 1


def test_orient_partial_needs_propagate(graph_file):
    error = run_failing("wordrep_orient", graph_file(K4), graph_file("1>2\n", "K4.arcs"))
    assert error.returncode == 2


def test_orient_propagate(graph_file, tmp_path):
    dot = tmp_path / "triangle.dot"
    triangle = graph_file("3 3\n1 2\n2 3\n1 3\n")
    out = run_command("wordrep_orient", triangle, graph_file("1>2\n2>3\n", "t.arcs"), propagate=True, dot=str(dot))
    assert "1 forcing steps" in out
    assert "1 -> 3;" in dot.read_text()


def test_proof_verify_bundled():
    out = run_command("wordrep_proof", "verify", "paper:A3", "paper:A3")
    assert "[passed] verdict" in out
    assert "accepted" in out


def test_proof_verify_wrong_graph():
    """A transcript naming vertices the graph lacks is rejected."""
    error = run_failing("wordrep_proof", "verify", "paper:W5", "paper:A3")
    assert error.returncode == 1


def test_proof_verify_needs_transcript():
    error = run_failing("wordrep_proof", "verify", "paper:A3")
    assert error.returncode == 2


def test_proof_emit(tmp_path):
    path = tmp_path / "B1.txt"
    run_command("wordrep_proof", "emit", "paper:B1", output=str(path))
    assert path.read_text().startswith("source ")
    out = run_command("wordrep_proof", "verify", "paper:B1", str(path))
    assert "accepted" in out


def test_proof_emit_representable():
    error = run_failing("wordrep_proof", "emit", "paper:A1")
    assert error.returncode == 2


def test_proof_mutate():
    report = json.loads(run_command("wordrep_proof", "mutate", "paper:A3", "paper:A3", json=True))
    assert [item["key"] for item in report["items"]] == ["reversals", "exchanges"]
    assert report["status"] == "passed"


@pytest.mark.parametrize(
    "to,expected",
    [
        ("graph6", "Bw\n"),
        ("edges", "3 3\n1 2\n1 3\n2 3\n"),
    ],
)
def test_convert(graph_file, to, expected):
    assert run_command("wordrep_convert", graph_file("3 3\n1 2\n2 3\n1 3\n"), to=to) == expected


def test_convert_from_graph6(graph_file):
    out = run_command("wordrep_convert", graph_file("Bw\n", "K3.g6"), to="dot")
    assert out.startswith("graph G {")
    assert "  1 -- 2;" in out


def test_family_build(tmp_path):
    path = tmp_path / "H3.edges"
    out = run_command("wordrep_family", "build", m=3, output=str(path))
    assert "[passed] valid" in out
    text = path.read_text()
    m_side, n_side = parse_sides(read_metadata(text)["sides"])
    assert validate_km_kn(FamilyGraph(parse_edge_list(text), m_side, n_side))


def test_family_enumerate():
    """Up to its full size, H3 has exactly one minimal non-representable induced subgraph."""
    report = json.loads(run_command("wordrep_family", "enumerate", m=3, json=True))
    assert report["status"] == "passed"
    assert [item["key"] for item in report["items"]] == ["A3"]


def test_family_characterize_small():
    report = json.loads(run_command("wordrep_family", "characterize", m=2, json=True))
    assert report["items"][0]["key"] == "characterization"
    assert report["counterexamples"] == []


@pytest.mark.parametrize("m", [0, 5])
def test_family_m_out_of_range(m):
    error = run_failing("wordrep_family", "build", m=m)
    assert error.returncode == 2


def test_paper_list():
    out = run_command("wordrep_paper", list=True)
    assert "round-trips" in out
    assert "slow" in out


def test_paper_unknown_claim():
    error = run_failing("wordrep_paper", only="round-trips,nonsense")
    assert error.returncode == 2


def test_paper_only_deterministic():
    """Two deterministic runs produce byte-identical JSON."""
    first = run_command("wordrep_paper", only="round-trips,orientations", deterministic=True, json=True)
    second = run_command("wordrep_paper", only="round-trips,orientations", deterministic=True, json=True)
    assert first == second
    report = json.loads(first)
    assert report["command"] == "wordrep paper --only round-trips,orientations"
    assert [item["status"] for item in report["items"]] == ["passed", "passed"]
    assert "elapsed_ms" not in report["items"][0]


def test_paper_record():
    run_command("wordrep_paper", only="orientations", record=True)
    run = models.VerificationRun.objects.get()
    assert run.status == models.VerificationRun.Status.PASSED
    assert [result.key for result in run.results.all()] == ["orientations"]


def test_paper_corrupted_asset(assets_copy):
    """A graph edited without updating MANIFEST makes its claim error, and only that claim."""
    path = assets_copy / "graphs" / "B4.edges"
    path.write_text(path.read_text() + "\n")
    with pytest.raises(CommandError) as excinfo:
        out = StringIO()
        call_command("wordrep_paper", only="transcripts,orientations", json=True, stdout=out)
    assert excinfo.value.returncode == 1
    report = json.loads(out.getvalue())
    assert report["status"] == "error"
    statuses = {item["key"]: item["status"] for item in report["items"]}
    assert statuses == {"transcripts": "error", "orientations": "passed"}
    assert "checksum" in report["items"][0]["detail"]


@pytest.mark.slow
def test_paper_quick():
    """Every claim not tagged slow holds."""
    report = json.loads(run_command("wordrep_paper", quick=True, json=True))
    assert report["status"] == "passed"
    assert report["counterexamples"] == []


@pytest.mark.parametrize("argv,code", [([], 2), (["--help"], 0), (["bogus"], 2)])
def test_console_script_usage(argv, code):
    assert console.main(argv) == code


def test_console_script_dispatch(capsys):
    """The console script runs the verb inside the configured project."""
    assert console.main(["check", "paper:W5", "--deterministic"]) == 0
    assert "non-word-representable" in capsys.readouterr().out
