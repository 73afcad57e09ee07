import json
from pathlib import Path

import pytest

from singular_dq.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_star_moyal(capsys):
    code, out, _ = run(capsys, "star", "--moyal", "x1", "p1")
    assert code == 0 and out.strip() == "x1*p1 + lambda"


def test_star_weyl_and_convert(capsys):
    code, out, _ = run(capsys, "star", "y1", "p1")
    assert code == 0 and "hbar" in out
    code, out, _ = run(capsys, "star", "--moyal", "--convert", "x1", "p1")
    assert code == 0 and out.strip() == "x1*p1 - 1/2*i*hbar"
    code, out, _ = run(capsys, "star", "--moyal", "--minus", "x1", "p1")
    assert out.strip() == "x1*p1 - lambda"


def test_json_output_and_global_options(capsys):
    code, out, _ = run(capsys, "--format", "json", "star", "--moyal", "x1", "p1")
    doc = json.loads(out)
    assert doc["schema_version"] == 1 and doc["command"] == "star"
    assert doc["result"] == "x1*p1 + lambda"
    code, out, _ = run(capsys, "star", "--format", "json", "--moyal", "x1", "p1")
    assert json.loads(out)["result"] == "x1*p1 + lambda"


def test_gamma_lift_basestar(capsys):
    conn = str(DATA / "connections" / "g111_x2.yaml")
    code, out, _ = run(capsys, "--order", "5", "gamma", conn)
    assert code == 0 and out.startswith("gamma = ")
    assert out.rstrip().endswith(": 0")
    code, out, _ = run(capsys, "--order", "5", "lift", conn, "x1*p1")
    assert code == 0 and out.rstrip().endswith(": 0")
    code, out, _ = run(capsys, "--order", "5", "basestar", conn, "x1", "x2")
    assert code == 0 and out.strip() == "x1*x2"
    code, out, _ = run(capsys, "--format", "json", "--order", "4", "gamma", conn)
    assert json.loads(out)["flat"] is True


def test_normalizer_verdicts(capsys, monkeypatch, tmp_path):
    ideal = str(DATA / "cross.ideal")
    code, out, _ = run(capsys, "normalizer", ideal, "p1")
    assert code == 1
    assert out.splitlines()[0] == "NOT-IN-NORMALIZER"
    assert "2*lambda ⋆ x2" in out
    code, out, _ = run(capsys, "normalizer", ideal, "p1*x1")
    assert code == 0 and out.startswith("IN-NORMALIZER")
    # bare builtin names resolve when no such file exists in the working directory
    monkeypatch.chdir(tmp_path)
    code, out, _ = run(capsys, "normalizer", "cross.ideal", "p1")
    assert code == 1 and out.startswith("NOT-IN-NORMALIZER")


def test_solve(capsys):
    code, out, _ = run(capsys, "solve", str(DATA / "cross.ideal"), "--max-degree", "3", "--lambda-cap", "1")
    assert code == 0
    assert out.startswith("54 basis elements")
    assert "ideal slice dimension 15" in out


def test_scenario_and_selftest(capsys):
    code, out, _ = run(capsys, "scenario", "double_line")
    assert code == 0 and "scenario double_line" in out
    code, out, _ = run(capsys, "--format", "json", "scenario", "cross")
    doc = json.loads(out)
    assert doc["passed"] and doc["reports"][0]["name"] == "cross"
    code, out, _ = run(capsys, "selftest", "--cases", "3")
    assert code == 0 and out.count("[pass]") == 6


# -- error paths --------------------------------------------------------------

def test_unknown_subcommand(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 2 and "invalid choice" in err


def test_missing_arguments(capsys):
    code, _, err = run(capsys, "star", "x1")
    assert code == 2


def test_parse_error_reports_position(capsys):
    code, _, err = run(capsys, "star", "x1 +", "p1")
    assert code == 2
    assert err.startswith("parse error:") and "column 5" in err
    code, _, err = run(capsys, "star", "psi1^2", "1")
    assert code == 2 and "odd variable" in err
    code, _, err = run(capsys, "star", "foo", "1")
    assert code == 2 and "unknown symbol 'foo'" in err


def test_dimension_exceeding_index(capsys):
    code, _, err = run(capsys, "star", "x3", "p1")
    assert code == 2 and "exceeds dimension" in err
    code, out, _ = run(capsys, "--dim", "3", "star", "--moyal", "x3", "p3")
    assert code == 0 and out.strip() == "x3*p3 + lambda"


def test_wrong_parameter(capsys):
    code, _, err = run(capsys, "star", "--moyal", "hbar", "x1")
    assert code == 2 and err.startswith("error:")


def test_unreadable_files(capsys, tmp_path):
    code, _, err = run(capsys, "gamma", str(tmp_path / "nope.yaml"))
    assert code == 2 and "cannot read connection file" in err
    code, _, err = run(capsys, "normalizer", str(tmp_path / "nope.ideal"), "x1")
    assert code == 2 and "cannot read ideal file" in err
    bad = tmp_path / "bad.ideal"
    bad.write_text("dim: [unclosed\n")
    code, _, err = run(capsys, "normalizer", str(bad), "x1")
    assert code == 2 and "not valid YAML" in err


def test_invalid_documents(capsys, tmp_path):
    bad = tmp_path / "bad.ideal"
    bad.write_text("dim: 2\ngenerators: ['x1*p1']\n")
    code, _, err = run(capsys, "normalizer", str(bad), "x1")
    assert code == 2 and err.startswith("invalid input:")
    bad = tmp_path / "bad.yaml"
    bad.write_text("dim: 2\nchristoffel: {G9_11: x1}\n")
    code, _, err = run(capsys, "gamma", str(bad))
    assert code == 2


def test_bad_numeric_options(capsys):
    conn = str(DATA / "connections" / "flat2.yaml")
    code, _, err = run(capsys, "--order", "1", "gamma", conn)
    assert code == 2 and "--order" in err
    code, _, _ = run(capsys, "--order", "-1", "gamma", conn)
    assert code == 2
    code, _, _ = run(capsys, "--dim", "0", "star", "x1", "p1")
    assert code == 2


def test_unknown_scenario_name(capsys):
    code, _, err = run(capsys, "scenario", "triple_point")
    assert code == 2 and "unknown scenario" in err


def test_not_in_normalizer_exit_code(capsys):
    # membership failure is a verification failure, not a usage error
    code, _, _ = run(capsys, "normalizer", str(DATA / "double_line.ideal"), "p2")
    assert code == 1
