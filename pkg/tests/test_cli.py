from __future__ import annotations

import csv
import io
import json
import shutil
import subprocess

import pytest

from scheme_forge.harness.cli import cli_run


def run(capsys, *argv):
    code = cli_run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_rho_prints_bare_value(capsys):
    code, out, _ = run(capsys, "metric", "rho", "--type", "tau2", "2", "5")
    assert (code, out) == (0, "3\n")


def test_verify_exits_zero(capsys):
    code, out, _ = run(capsys, "verify", "--type", "tau2", "--bound", "10")
    assert code == 0
    assert out.strip().splitlines()[-1].endswith("checks passed")
    assert "FAIL" not in out


def test_verify_subset(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--type", "tau4", "--checks", "metric-axioms", "xi-lemma", "--out", str(target))
    assert code == 0
    assert [r["name"] for r in json.loads(target.read_text())] == ["metric-axioms", "xi-lemma"]


@pytest.mark.parametrize(
    "argv",
    [
        ["metric", "rho", "--type", "tau2", "--bogus", "2", "5"],
        ["metric", "rho", "--type", "tau2", "2"],
        ["nothing"],
        [],
        ["metric", "rho", "--type", "tau9", "2", "5"],
        ["metric", "rho", "--type", "tau2", "x", "5"],
        ["verify", "--checks", "no-such-check"],
        ["derive", "color", "--type", "tau2", "1", "2", "3"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_membership_exit_codes(capsys):
    assert run(capsys, "scheme", "member", "--type", "tau2", "0", "1", "2")[0] == 0
    code, out, _ = run(capsys, "scheme", "member", "--type", "tau2", "0", "1", "5")
    assert code == 1 and json.loads(out)["member"] is False


def test_type_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "type", "validate", "--type", "tau2")
    assert code == 0 and json.loads(out)["good"] == "Good"
    code, out, _ = run(capsys, "type", "show", "--type", "tau2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["m"]) for r in rows[:5]] == [1, 2, 3, 6, 10]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"prefix": [[2, 2, 0]]}))
    assert run(capsys, "type", "validate", "--type", str(bad))[0] == 2


def test_levels_csv(capsys):
    code, out, _ = run(capsys, "scheme", "levels", "--type", "tau2", "--level", "1", "--bound", "8", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["level,set", "1,0 1", "1,0 2", "1,3 4", "1,3 5", "1,0 6"]


def test_export_import_round_trip(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SCHEME_FORGE_CACHE", str(tmp_path / "cache"))
    frag = tmp_path / "frag.json"
    assert run(capsys, "scheme", "export", "--type", "tau4", "--bound", "20", "--out", str(frag))[0] == 0
    assert list((tmp_path / "cache").glob("fragment-*.json"))
    code, out, _ = run(capsys, "scheme", "import", str(frag))
    assert code == 0 and json.loads(out)["mismatches"] == []
    # a second export is served from the cache and is identical
    again = tmp_path / "again.json"
    run(capsys, "scheme", "export", "--type", "tau4", "--bound", "20", "--out", str(again))
    assert again.read_text() == frag.read_text()


def test_import_detects_wrong_sets(capsys, tmp_path):
    frag = tmp_path / "frag.json"
    run(capsys, "scheme", "export", "--type", "tau2", "--bound", "10", "--out", str(frag))
    data = json.loads(frag.read_text())
    data["levels"]["1"][0] = [0, 5]
    frag.write_text(json.dumps(data))
    assert run(capsys, "scheme", "import", str(frag))[0] == 1


def test_config_keys(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"type": "tau4", "format": "csv"}))
    code, out, _ = run(capsys, "metric", "rho", "--config", str(cfg), "1", "10")
    assert (code, out) == (0, "2\n")
    # flags win over the file
    code, out, _ = run(capsys, "metric", "rho", "--config", str(cfg), "--type", "tau2", "2", "5")
    assert out == "3\n"
    cfg.write_text(json.dumps({"colour": "red"}))
    assert run(capsys, "metric", "rho", "--config", str(cfg), "2", "5")[0] == 2


def test_extend_and_replay(capsys, tmp_path):
    log = tmp_path / "chain.json"
    code, out, _ = run(capsys, "extend", "run", "--type", "tau2", "--count", "250", "--out", str(log))
    assert code == 0
    summary = json.loads(out)
    assert summary["served"] >= 200
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "extend", "replay", str(log), "--out", str(a))[0] == 0
    assert run(capsys, "extend", "replay", str(log), "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["levels"]


def test_extend_with_request_file(capsys, tmp_path):
    reqs = tmp_path / "reqs.json"
    reqs.write_text(json.dumps([{"op": "contain", "alpha": "w+4"}, {"op": "include", "F": [0, 1]}]))
    code, out, _ = run(capsys, "extend", "run", "--type", "tau2", "--requests", str(reqs))
    assert code == 0 and json.loads(out)["served"] == 2
    reqs.write_text("not json")
    assert run(capsys, "extend", "run", "--type", "tau2", "--requests", str(reqs))[0] == 2


@pytest.mark.parametrize(
    "argv, check",
    [
        (["metric", "delta", "--type", "tau2", "2", "5"], lambda o: o == "3"),
        (["metric", "ball", "--type", "tau2", "5", "1"], lambda o: json.loads(o)["set"] == [3, 5]),
        (["capture", "pi", "--type", "tau2", "1", "2", "4", "5"], lambda o: json.loads(o) == [2, 3]),
        (["capture", "bracket", "--type", "tau2", "2", "5"], lambda o: o == "3"),
        (["capture", "bracket", "--type", "tau2", "1", "2", "4", "5"], lambda o: json.loads(o) == [2, 3, 5]),
        (["capture", "scan", "--type", "tau2", "1", "5"], lambda o: json.loads(o) == []),
        (["derive", "gap", "--type", "tau2", "5", "-K", "3"], lambda o: json.loads(o)["left"] == [3, 5, 7]),
        (["derive", "gap", "--type", "tau2", "2", "5"], lambda o: json.loads(o)["rho"] == 3),
        (["derive", "luzin", "--type", "tau2", "5", "-K", "3"], lambda o: len(json.loads(o)["boxes"]) == 3),
        (["derive", "luzin", "--type", "tau2", "5", "--separator"], lambda o: len(json.loads(o)) > 0),
        (["derive", "rep", "--type", "tau2", "2", "5", "--less", "2<5"], lambda o: set(json.loads(o)) == {"2", "5"}),
        (["derive", "countryman", "--type", "tau2", "4", "5"], lambda o: json.loads(o)["order"] == "Less"),
        (["derive", "tree", "--type", "tau2", "5", "--patch", "0=7"], lambda o: json.loads(o)["class"] == [7, 5]),
        (["derive", "osc", "--type", "tau2", "2", "4"], lambda o: json.loads(o)["set"] == [1]),
        (["derive", "color", "--type", "tau4", "1", "10"], lambda o: json.loads(o)["c_triple"]["case"] == 1),
        (["derive", "entangled", "--type", "tauE", "2", "1"], lambda o: o == "2"),
        (["derive", "suslin-fn", "--type", "tauS", "1", "0"], lambda o: o == "0"),
        (["derive", "sspace", "--type", "tau2", "5"], lambda o: json.loads(o)["H"] == [2, 3, 4]),
    ],
)
def test_query_commands(capsys, argv, check):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    assert check(out.strip())


def test_color_table(capsys):
    code, out, _ = run(capsys, "derive", "color", "--type", "tau2", "--bound", "5", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 10
    assert set(rows[0]) == {"alpha", "beta", "o", "o_star", "c"}


def test_domain_errors_exit_two(capsys):
    assert run(capsys, "derive", "suslin-fn", "--type", "tau2", "w", "0")[0] == 2
    assert run(capsys, "derive", "rep", "--type", "tau2", "2", "5", "--less", "2<9")[0] == 2


@pytest.mark.skipif(shutil.which("scheme-forge") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["scheme-forge", "metric", "rho", "--type", "tau2", "2", "5"], capture_output=True, text=True)
    assert (proc.returncode, proc.stdout) == (0, "3\n")
    proc = subprocess.run(["scheme-forge", "metric", "rho", "--nope"], capture_output=True, text=True)
    assert proc.returncode == 2
