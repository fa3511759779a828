from __future__ import annotations

import json
import subprocess
import sys

import pytest

from ckpolylog import __version__
from ckpolylog.cli import EXIT_BUDGET, EXIT_CONFIG, EXIT_OK, main


@pytest.fixture(autouse=True)
def cache(tmp_path, monkeypatch):
    monkeypatch.setenv("CKPOLYLOG_CACHE", str(tmp_path / "cache"))
    monkeypatch.chdir(tmp_path)


def load(path):
    doc = json.loads(open(path).read())
    assert doc["format"] == "ckpolylog/1" and doc["version"] == __version__
    return doc


def test_geom(tmp_path):
    assert main(["geom", "--scheme", "Z[1/2]", "--depth", "2", "--out", "g.json"]) == EXIT_OK
    assert load("g.json")["result"]["generators"] == ["Li2 - 1/2*log*Li1"]


def test_count_spec_z(capsys):
    assert main(["count", "--scheme", "Z", "--depth", "2"]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "∅"
    path = out[1].split(": ", 1)[1]
    doc = load(path)
    assert doc["result"]["points"] == [] and doc["result"]["state"]["report"]["certified"]


def test_count_budget_zero(capsys):
    assert main(["count", "--scheme", "Z", "--budget", "0", "--out", "c.json"]) == EXIT_BUDGET
    assert capsys.readouterr().out.startswith("budget exhausted")
    assert load("c.json")["result"]["state"]["report"] is None


def test_basis():
    assert main(["basis", "--qs", "2", "--depth", "2", "--out", "b.json"]) == EXIT_OK
    res = load("b.json")["result"]
    assert res["q_M"] == 2 and res["p"] == 3 and res["points"] == []


def test_loci():
    assert main(["loci", "--scheme", "Z[1/2]", "--prime", "7", "--out", "l.json"]) == EXIT_OK
    res = load("l.json")["result"]
    assert res["certified"] and res["known_points"] == ["-1", "1/2", "2"]


def test_determinism():
    main(["geom", "--scheme", "Z[1/2]", "--depth", "4", "--out", "a.json"])
    main(["geom", "--scheme", "Z[1/2]", "--depth", "4", "--out", "b.json"])
    assert open("a.json").read() == open("b.json").read()


def test_config_errors(capsys):
    assert main(["geom", "--scheme", "Q"]) == EXIT_CONFIG
    assert json.loads(capsys.readouterr().err)["error"]["code"] == "config"
    assert main(["geom", "--depth", "0"]) == EXIT_CONFIG


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "ckpolylog", "geom", "--scheme", "Z", "--depth", "1"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["result"]["generators"] == ["log", "Li1"]


def test_selftest():
    assert main(["selftest", "--out", "s.json"]) == EXIT_OK
    assert all(r["ok"] for r in load("s.json")["result"].values())
