from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from graphqss.cli import EXIT_DATA, EXIT_IO, EXIT_OK, EXIT_REFUSED, EXIT_USAGE, main, parse_args


def run(capsys, *argv: str) -> tuple[int, dict | None, str]:
    code = main([*argv, "--deterministic"] if argv and not argv[0].startswith("-") else list(argv))
    out = capsys.readouterr()
    try:
        report = json.loads(out.out)
    except json.JSONDecodeError:
        report = None
    return code, report, out.err


class TestParse:
    def test_access_config(self):
        cfg = parse_args(["access", "--graph", "pentagon.json", "--subset", "0,1,2"])
        assert cfg.command == "access" and cfg.args.subset == (0, 1, 2)

    def test_seed_flag(self):
        assert parse_args(["cq", "--scheme", "nn:5", "--rounds", "100", "--seed", "7"]).seed == 7

    def test_seed_from_environment(self, monkeypatch):
        monkeypatch.setenv("GRAPHQSS_SEED", "99")
        assert parse_args(["cc", "--scheme", "nn:3", "--secret", "0", "--subset", "0,1,2"]).seed == 99

    def test_default_seed(self, monkeypatch):
        monkeypatch.delenv("GRAPHQSS_SEED", raising=False)
        assert parse_args(["verify"]).seed == 1234


@pytest.mark.parametrize(
    "argv",
    [
        ["cq", "--scheme", "ring4"],
        ["qq", "--scheme", "ring4", "--alpha", "1", "--beta", "0", "--subset", "0,1,2", "--target", "0"],
        ["access", "--scheme", "ring5", "--subset", "0,x"],
        ["access", "--scheme", "ring5", "--subset", "0,0,1"],
        ["cc", "--scheme", "ring5", "--secret", "2", "--subset", "0,1,2"],
        ["cq", "--scheme", "nn:3", "--check-fraction", "1.5"],
        ["frobnicate"],
        ["cc", "--scheme", "ring5", "--bogus"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    assert main(argv) == EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_cc_authorized(capsys):
    code, rep, _ = run(capsys, "cc", "--scheme", "ring5", "--secret", "1", "--subset", "0,1,2")
    assert code == EXIT_OK
    assert rep["transcript"]["bit"] == 1 and rep["transcript"]["result"] == "reconstructed"
    assert rep["vertex_indexing"] == "0-based" and "timestamp" not in rep


def test_cc_denied(capsys):
    code, rep, _ = run(capsys, "cc", "--scheme", "ring5", "--secret", "1", "--subset", "0,1")
    assert code == EXIT_REFUSED and rep["transcript"]["result"] == "denied"


def test_cq_with_eve_aborts(capsys):
    code, rep, _ = run(
        capsys, "cq", "--scheme", "ring5", "--rounds", "2000", "--eve", "intercept-resend", "--summary-only"
    )
    assert code == EXIT_REFUSED
    t = rep["transcript"]
    assert t["verdict"] == "abort" and 0.15 < t["qber"] < 0.35
    assert "round_records" not in t


def test_cq_clean_with_witness(capsys):
    code, rep, _ = run(capsys, "cq", "--scheme", "nn:3", "--rounds", "400", "--witness")
    assert code == EXIT_OK
    assert rep["witness"]["conclusion"] == "full-state"
    assert len(rep["transcript"]["round_records"]) == 400


def test_qq_ring5(capsys):
    code, rep, _ = run(
        capsys, "qq", "--scheme", "ring5", "--alpha", "0.6", "--beta", "0.8",
        "--subset", "0,2,3", "--target", "2", "--mode", "joint",
    )
    assert code == EXIT_OK and rep["transcript"]["fidelity"] == pytest.approx(1.0, abs=1e-10)


def test_qq_unnormalized_is_data_error(capsys):
    code, _, err = run(capsys, "qq", "--scheme", "nn:3", "--alpha", "1", "--beta", "1", "--subset", "0,1,2", "--target", "0")
    assert code == EXIT_DATA and "normalized" in err


def test_access_with_oracle(capsys):
    code, rep, _ = run(capsys, "access", "--scheme", "ring5", "--subset", "0,1,3", "--verify-oracle")
    assert code == EXIT_OK
    assert rep["oracle"] == {"accessible_match": True, "dependent_match": True}


def test_access_threshold(capsys):
    code, rep, _ = run(capsys, "access", "--scheme", "ring5", "--threshold", "3")
    assert code == EXIT_OK and rep["threshold"]["passed"]
    code, rep, _ = run(capsys, "access", "--scheme", "ring5", "--threshold", "2")
    assert code == EXIT_REFUSED


def test_graph_from_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO('{"n": 4, "edges": [[0,1],[1,2],[2,3],[3,0]]}'))
    code, rep, _ = run(capsys, "graph", "--graph", "-", "--measure-y", "0")
    assert code == EXIT_OK
    assert rep["result"]["graph"]["squares"] == [0, 2]


def test_graph_local_complement(capsys):
    code, rep, _ = run(capsys, "graph", "--scheme", "nn:4", "--local-complement", "0")
    assert code == EXIT_OK and len(rep["result"]["graph"]["edges"]) == 6


def test_graph_stabilizer_signs_follow_labels(capsys, tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"n": 2, "edges": [[0, 1]], "labels": [[0, 1], [1, 0]]}))
    code, rep, _ = run(capsys, "graph", "--graph", str(p))
    # X on vertex 1 flips K_0 = XZ; Z on vertex 0 flips it again
    assert rep["input"]["stabilizers"] == ["+XZ", "+ZX"]


def test_missing_file_is_io_error(capsys):
    code, _, _ = run(capsys, "graph", "--graph", "/nonexistent/g.json")
    assert code == EXIT_IO


def test_domain_error(capsys):
    code, _, err = run(capsys, "graph", "--scheme", "nn:3", "--measure-z", "7")
    assert code == EXIT_DATA


def test_output_and_figure(capsys, tmp_path):
    out, fig = tmp_path / "r.json", tmp_path / "f.png"
    code = main(["cc", "--scheme", "nn:4", "--secret", "0", "--subset", "0,1,2,3", "-o", str(out), "--figure", str(fig)])
    assert code == EXIT_OK
    assert json.loads(out.read_text())["command"] == "cc"
    assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


@pytest.mark.parametrize(
    "argv",
    [
        ["cq", "--scheme", "nn:3", "--rounds", "200"],
        ["qq", "--scheme", "nn:3", "--alpha", "0.6", "--beta", "0.8", "--subset", "0,1,2", "--target", "0"],
        ["verify", "--graphs", "3", "--max-n", "3"],
        ["access", "--scheme", "ring5", "--subset", "0,1,2"],
        ["graph", "--scheme", "ring5", "--dealer", "--conjugate", "5"],
    ],
)
def test_figures_render(capsys, tmp_path, argv):
    fig = tmp_path / "f.png"
    assert main([*argv, "--figure", str(fig)]) in (EXIT_OK, EXIT_REFUSED)
    assert fig.stat().st_size > 1000


def test_same_seed_reproducible(capsys):
    a = run(capsys, "cq", "--scheme", "ring5", "--rounds", "100", "--seed", "5")[1]
    b = run(capsys, "cq", "--scheme", "ring5", "--rounds", "100", "--seed", "5")[1]
    assert a == b


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "graphqss", "cc", "--scheme", "ring5", "--secret", "1", "--subset", "0,1", "--deterministic"],
        capture_output=True, text=True,
    )
    assert proc.returncode == EXIT_REFUSED
    assert json.loads(proc.stdout)["transcript"]["result"] == "denied"
