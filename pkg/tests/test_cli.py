import csv
import io
import json
import subprocess
import sys

import pytest

from favard.cli import run


def _run(args, capsys):
    code = run(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def _json(args, capsys):
    code, out, _ = _run(args, capsys)
    return code, json.loads(out)


@pytest.mark.parametrize(
    "args",
    [
        ["gasket", "--level", "1"],
        ["cantor", "--level", "2"],
        ["project", "--level", "0", "--theta", "1.5707963267948966"],
        ["favard", "--level", "2", "--angles", "256"],
        ["mc", "--level", "1", "--samples", "2000", "--seed", "4"],
        ["decay-scan", "--max-level", "3", "--angles", "128"],
        ["bad-directions", "--N", "1", "--K", "3", "--angles", "128"],
        ["zeros", "--theta", "0.7", "--x-range", "0", "9"],
        ["track", "--theta0", "0", "--theta1", "0.1", "--steps", "4"],
        ["ssv", "--theta", "0", "--m", "1"],
        ["stacking", "--theta", "1.5707963267948966", "--n", "1", "--X", "3"],
        ["verify", "--suite", "identities"],
    ],
)
def test_commands_succeed_with_header(args, capsys):
    code, rep = _json(args, capsys)
    assert code == 0
    assert rep["schema_version"] == 1
    assert rep["command"] == args[0]
    assert "threads" not in rep["config"]


def test_project_oracle(capsys):
    _, rep = _json(["project", "--level", "0", "--theta", "1.5707963267948966"], capsys)
    r = rep["result"]
    assert r["support"] == pytest.approx(3.5) and r["l1"] == pytest.approx(6.0) and r["max_count"] == 3


def test_decay_csv(capsys):
    code, out, _ = _run(["decay-scan", "--max-level", "3", "--angles", "128", "--format", "csv"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# schema_version=1"
    assert lines[1].startswith("# config=")
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[2:]))))
    assert [r["n"] for r in rows] == ["0", "1", "2", "3"]
    assert rows[0]["fav_n_over_log_n"] == ""
    assert set(rows[0]) == {"n", "fav", "error", "fav_n_over_log_n"}


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"level": 2, "angles": 64}))
    _, rep = _json(["favard", "--config", str(cfg)], capsys)
    assert rep["config"] == {"family": "gasket", "level": 2, "angles": 64}
    _, rep = _json(["favard", "--config", str(cfg), "--angles", "128"], capsys)
    assert rep["config"]["angles"] == 128 and rep["config"]["level"] == 2


def test_output_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run(["gasket", "--level", "0", "--output", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert len(json.loads(out.read_text())["result"]["centers"]) == 3


@pytest.mark.parametrize(
    "args,flag",
    [
        (["favard", "--level", "x"], "--level"),
        (["favard", "--bogus", "1"], "--bogus"),
        (["verify", "--suite", "nope"], "--suite"),
    ],
)
def test_usage_errors(args, flag, capsys):
    code, _, err = _run(args, capsys)
    assert code == 2 and flag in err


def test_precondition_errors_exit_2(capsys):
    code, _, err = _run(["bad-directions", "--N", "9", "--K", "2"], capsys)
    assert code == 2 and "budget" in err
    code, _, err = _run(["ssv", "--theta", "0.3", "--m", "2", "--grid-step", "0.5"], capsys)
    assert code == 2 and "grid_step" in err
    code, _, err = _run(["favard", "--level", "1", "--threads", "0"], capsys)
    assert code == 2


def test_bad_config_file(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, _, err = _run(["favard", "--config", str(p)], capsys)
    assert code == 2 and "--config" in err


@pytest.mark.parametrize("args", [["mc", "--level", "2", "--samples", "40000", "--seed", "9"], ["verify", "--suite", "R1", "--seed", "3"]])
def test_threads_do_not_change_reports(tmp_path, args):
    outs = []
    for t in ("1", "2", "4"):
        p = tmp_path / f"r{t}.json"
        subprocess.run([sys.executable, "-m", "favard.cli", *args, "--threads", t, "--output", str(p)], check=True)
        outs.append(p.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_verification_failure_exit_code(monkeypatch, capsys):
    import favard.verify as v

    monkeypatch.setitem(v._RUNNERS, "identities", lambda seed=0: {"lemma": "identities", "instances": 1, "worst_ratio": 2.0, "pass": False})
    code, out, _ = _run(["verify", "--suite", "identities"], capsys)
    assert code == 1 and json.loads(out)["result"]["pass"] is False
