import json

import pytest

from vorg.cli import main


def _word_file(tmp_path, text, name="word.txt"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_validate_accept(tmp_path, capsys):
    path = _word_file(tmp_path, "46\n")
    assert main(["validate", path, "--pattern", "tr"]) == 0
    out = capsys.readouterr().out
    assert "tiling:  accept" in out and "product: accept" in out


def test_validate_reject(tmp_path, capsys):
    path = _word_file(tmp_path, "22\n")
    assert main(["validate", path, "--pattern", "tr"]) == 1
    out = capsys.readouterr().out
    assert "reject" in out


def test_validate_ring(tmp_path):
    path = _word_file(tmp_path, "47\n2e\n")
    assert main(["validate", path, "--pattern", "rat"]) == 0


def test_validate_parse_error(tmp_path, capsys):
    path = _word_file(tmp_path, "4x\n")
    assert main(["validate", path, "--pattern", "tr"]) == 2
    assert "parse error" in capsys.readouterr().err


def test_generate_enumerate(tmp_path, capsys):
    assert main(["generate", "--pattern", "rat", "--cells", "4"]) == 0
    out = capsys.readouterr().out
    assert "47\n2e" in out and "7e\n42" in out


def test_generate_random_deterministic(capsys):
    assert main(["generate", "--pattern", "tr", "--cells", "9",
                 "--mode", "random", "--seed", "5"]) == 0
    first = capsys.readouterr().out
    assert main(["generate", "--pattern", "tr", "--cells", "9",
                 "--mode", "random", "--seed", "5"]) == 0
    assert capsys.readouterr().out == first


def test_generate_no_member(capsys):
    assert main(["generate", "--pattern", "rat", "--cells", "3"]) == 1


def test_contour_command(tmp_path, capsys):
    path = _word_file(tmp_path, "222\n2*2\n222\n")
    assert main(["contour", path]) == 0
    assert capsys.readouterr().out.strip() == "(r^3d^3l^3u^3; (drul,1,1))"


def test_simulate_deterministic(tmp_path, capsys):
    scenario = tmp_path / "scenario.json"
    scenario.write_text(json.dumps({
        "gridWidth": 8, "gridHeight": 8, "ticks": 12,
        "sourceEventProb": 0.3, "seed": 4,
        "initialWord": {"pattern": "tr", "cells": 8},
    }))
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(["simulate", str(scenario), "--out", str(out1)]) == 0
    assert main(["simulate", str(scenario), "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    header = out1.read_text().splitlines()[0]
    assert header == "tick,rootFlow,avgFlowbenefit,event".replace(
        "avgFlowbenefit", "avgFlow,benefit")


def test_simulate_override_seed(tmp_path):
    scenario = tmp_path / "scenario.json"
    scenario.write_text(json.dumps({"ticks": 8, "seed": 4}))
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert main(["simulate", str(scenario), "--out", str(a)]) == 0
    assert main(["simulate", str(scenario), "--seed", "9",
                 "--out", str(b)]) == 0
    assert a.read_text() != b.read_text()


def test_simulate_missing_file(capsys):
    assert main(["simulate", "/nonexistent/scenario.json"]) == 2


def test_experiment_output_files(tmp_path, capsys):
    out = tmp_path / "results"
    assert main(["experiment", "ratio", "--trials", "2", "--seed", "3",
                 "--out", str(out)]) == 0
    summary = json.loads((out / "ratio_summary.json").read_text())
    assert summary["trials"] == 2
    rows = (out / "ratio_trials.csv").read_text().splitlines()
    assert rows[0] == "trial,ratio,steps"
    assert len(rows) == 3
    printed = capsys.readouterr().out
    assert "PASS" in printed or "WARN" in printed


def test_bad_usage():
    assert main(["frobnicate"]) == 2
