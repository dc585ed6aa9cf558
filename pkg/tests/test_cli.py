import json
import subprocess
import sys

import pytest

from hopfbrat.cli import main

EQ47 = "in 1,2; out 1,4; mult [[1,0],[2,1]]\n"


@pytest.fixture
def level_file(tmp_path):
    p = tmp_path / "eq47.lvl"
    p.write_text(EQ47)
    return p


def test_analyze_text(level_file, capsys):
    assert main(["analyze", str(level_file)]) == 0
    out = capsys.readouterr().out
    assert "stage C: identity M1; case1(lengths=(2, 2))" in out
    assert "all checks passed" in out


def test_analyze_json_file(level_file, tmp_path):
    target = tmp_path / "out.json"
    assert main(["analyze", str(level_file), "--json", str(target)]) == 0
    data = json.loads(target.read_text())
    assert data["ok"] and len(data["pieces"]) == 3


def test_size_limit_is_usage_error(level_file, capsys):
    assert main(["analyze", str(level_file), "--max-dim", "3"]) == 2
    assert "case1" in capsys.readouterr().err


def test_direct_counterexample_is_negative(tmp_path, capsys):
    p = tmp_path / "bad.lvl"
    p.write_text("in 1,1; out 1,2; mult [[1,0],[1,1]]")
    assert main(["analyze", str(p), "--direct"]) == 1
    assert "13 not divisible by 5" in capsys.readouterr().out


def test_parse_error_exit_code(tmp_path, capsys):
    p = tmp_path / "broken.lvl"
    p.write_text("in 1,2; out 1,4 mult [[1,0],[2,1]]")
    assert main(["analyze", str(p)]) == 2
    assert "line 1, column 17" in capsys.readouterr().err


def test_missing_file():
    assert main(["analyze", "/nonexistent/level"]) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["case1", "--lengths", "2,1"],
        ["case2", "--k", "1", "--n", "2"],
        ["case3", "--dims", "1,2", "--n", "2"],
        ["trivial", "--n", "3"],
        ["calculus", "--n", "2", "--subset", "(0,1),(1,0),(1,1)"],
    ],
)
def test_subcommands_pass(argv):
    assert main(argv) == 0


def test_case_json_includes_connection(capsys):
    assert main(["case2", "--k", "1", "--n", "2", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["is_hopf_galois"] and set(data["connection"]["table"]) == {"0,0", "0,1", "1,0", "1,1"}


def test_calculus_json(capsys):
    assert main(["calculus", "--n", "2", "--subset", "(1,0),(1,1)", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["rank"] == 2 and not data["universal"]


@pytest.mark.parametrize(
    "argv",
    [
        ["calculus", "--n", "2", "--subset", "(0,0)"],
        ["case2", "--k", "0", "--n", "2"],
        ["case1", "--lengths", "2,0"],
    ],
)
def test_bad_arguments(argv):
    assert main(argv) == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as ei:
        main(["case1", "--lengths", "a,b"])
    assert ei.value.code == 2


def test_module_entry_point(level_file):
    proc = subprocess.run([sys.executable, "-m", "hopfbrat", "analyze", str(level_file)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
