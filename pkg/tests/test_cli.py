"""End-to-end CLI runs: exit codes, formats, determinism, file emission."""

from __future__ import annotations

import json

import pytest

from lbfkit import cli, topo


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_verify_forms_json(capsys):
    code, out, err = run(capsys, "verify-forms", "--n", "3")
    assert code == 0
    assert err == ""
    data = json.loads(out)
    assert data["schema"] == "lbf-kit/1"
    assert data["command"] == "verify-forms"
    assert data["config"]["n"] == 3
    assert len(data["identities"]) == 9
    assert all(r["verdict"] == "exact-equal" for r in data["identities"])
    assert data["top_power_grid"]["positive"] is True
    assert data["passed"] is True


def test_fillings_table_matches_the_published_chis(capsys):
    code, out, _ = run(capsys, "fillings", "--n", "2", "--k", "5",
                       "--format", "table")
    assert code == 0
    lines = out.splitlines()
    cells = [line.split() for line in lines[1:4]]
    assert [c[0] for c in cells] == ["1", "2", "3"]          # ell column
    assert [c[-3] for c in cells] == ["0", "4", "8"]         # chi_betti
    assert "3 fillings, pairwise distinct" in out


def test_resolve_trace(capsys):
    code, out, _ = run(capsys, "resolve", "--k", "3", "--dim", "1")
    assert code == 0
    data = json.loads(out)
    trace = data["trace"]
    assert trace["step_count"] == 2
    assert trace["resolved"] is True
    assert trace["steps"][-1]["verdict"] == "Smooth"
    assert [s["direction"] for s in data["word_chain"]] == ["contract", "contract"]


def test_resolve_csv(capsys):
    code, out, _ = run(capsys, "resolve", "--k", "8", "--dim", "0",
                       "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("step,chart,polynomial,multiplicity,verdict")
    assert lines[1] == '1,1,"y0^2 + y1^7",2,AType(6)'
    assert lines[-1].endswith("Smooth")


def test_transport_and_contact_pass(capsys):
    code, out, _ = run(capsys, "transport")
    assert code == 0
    data = json.loads(out)
    limits = data["limits_at_zero"]
    assert abs(limits["plus"] - 0.5) < limits["tolerance"]
    assert abs(limits["minus"] + 0.5) < limits["tolerance"]
    assert data["passed"] is True
    code, out, _ = run(capsys, "contact-check", "--n", "3")
    assert code == 0
    data = json.loads(out)
    assert data["profile"]["passed"] is True
    assert data["passed"] is True


def test_stdout_is_deterministic(capsys):
    _, first, _ = run(capsys, "fillings", "--k", "7")
    _, second, _ = run(capsys, "fillings", "--k", "7")
    assert first == second


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "fillings", "--k", "0")[0] == 2
    assert run(capsys, "resolve", "--k", "-3")[0] == 2
    assert run(capsys, "transport", "--grid", "0:1:5")[0] == 2      # grid hits t=0
    assert run(capsys, "transport", "--grid", "1:2")[0] == 2
    assert run(capsys, "verify-forms", "--n", "1")[0] == 2


def test_bad_thread_env_exits_2(capsys, monkeypatch):
    monkeypatch.setenv("LBFKIT_THREADS", "frog")
    assert run(capsys, "verify-forms")[0] == 2
    monkeypatch.setenv("LBFKIT_THREADS", "0")
    assert run(capsys, "verify-forms")[0] == 2


def test_thread_env_respected(capsys, monkeypatch):
    monkeypatch.setenv("LBFKIT_THREADS", "4")
    code, out, _ = run(capsys, "verify-forms")
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_verification_failure_exits_1(capsys, monkeypatch):
    # constant chi collapses the distinctness gate
    monkeypatch.setattr(topo, "chi_filling", lambda *a, **k: 7)
    code, _, err = run(capsys, "fillings", "--k", "5")
    assert code == 1
    assert "FAIL" in err
    assert "not pairwise distinct" in err


def test_out_file_and_timing_sidecar(capsys, tmp_path):
    target = tmp_path / "forms.json"
    code, out, _ = run(capsys, "verify-forms", "--out", str(target))
    assert code == 0
    assert out == ""
    data = json.loads(target.read_text())
    assert data["schema"] == "lbf-kit/1"
    sidecar = tmp_path / "forms.json.timing.json"
    timing = json.loads(sidecar.read_text())
    assert timing["schema"] == "lbf-kit/1-timing"
    assert timing["command"] == "verify-forms"
    assert timing["elapsed_ms"] > 0.0


def test_csv_out(capsys, tmp_path):
    target = tmp_path / "forms.csv"
    code, _, _ = run(capsys, "verify-forms", "--format", "csv",
                     "--out", str(target))
    assert code == 0
    lines = target.read_text().splitlines()
    assert lines[0] == "identity,verdict"
    assert len(lines) == 10


def test_all_runs_every_suite(capsys, tmp_path):
    out_dir = tmp_path / "reports"
    out_dir.mkdir()
    code, _, err = run(capsys, "all", "--out", str(out_dir))
    assert code == 0
    assert err == ""
    names = sorted(p.name for p in out_dir.iterdir())
    assert names == [
        "contact-check.json",
        "fillings.json",
        "resolve.json",
        "timing.json",
        "transport.json",
        "verify-forms.json",
    ]
    for name in names:
        json.loads((out_dir / name).read_text())     # every file is valid JSON


def test_all_is_byte_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir(), b.mkdir()
    assert run(capsys, "all", "--out", str(a))[0] == 0
    assert run(capsys, "all", "--out", str(b))[0] == 0
    for path in sorted(a.iterdir()):
        if path.name == "timing.json":
            continue                       # the one file allowed to differ
        assert path.read_bytes() == (b / path.name).read_bytes(), path.name


def test_help_exits_0(capsys):
    assert run(capsys, "--help")[0] == 0
    assert run(capsys, "transport", "--help")[0] == 0
