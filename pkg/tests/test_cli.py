from __future__ import annotations

import json

import pytest

from localcolor.cli import RunReport, main
from localcolor.coloring import KColoring, Mode, format_coloring, parse_coloring, validate
from localcolor.graph import complete_graph, format_graph, parse_graph


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, json.loads(capsys.readouterr().out)


@pytest.fixture
def files(tmp_path):
    paths = {
        "xxx": tmp_path / "xxx.nae",
        "xynx": tmp_path / "xynx.nae",
        "k3": tmp_path / "k3.graph",
    }
    paths["xxx"].write_text("p nae3 1 1\n1 1 1\n")
    paths["xynx"].write_text("p nae3 2 2\n1 2 -1\n1 -2 2\n")
    paths["k3"].write_text(format_graph(complete_graph(3)))
    return tmp_path, paths


def test_reduce_full_then_solve(capsys, files):
    tmp, p = files
    code, rep = run(capsys, "reduce", p["xynx"], "--k", 3, "--out", tmp / "out.v1")
    assert code == 0 and rep["results"]["vertices"] == 4 + 2 * 5 + 4 * 3
    assert (tmp / "out.v1.graph").exists() and (tmp / "out.v1.trace.json").exists()
    code, rep = run(capsys, "solve", tmp / "out.v1.graph", "--k", 3, "--out", tmp / "w.col")
    assert code == 0 and rep["results"]["answer"] == "colorable"
    code, rep = run(capsys, "check", tmp / "out.v1.graph", tmp / "w.col", "--mode", "local")
    assert code == 0 and rep["results"]["valid"]


def test_reduce_unsat_is_not_colorable(capsys, files):
    tmp, p = files
    run(capsys, "reduce", p["xxx"], "--k", 3, "--out", tmp / "x")
    code, rep = run(capsys, "solve", tmp / "x.graph", "--k", 3)
    assert code == 0 and rep["results"]["answer"] == "not-colorable"
    assert rep["nodes"] > 0


def test_reduce_constrained_writes_groups(capsys, files):
    tmp, p = files
    code, rep = run(capsys, "reduce", p["xxx"], "--k", 3, "--stage", "constrained", "--out", tmp / "c")
    assert code == 0 and rep["results"]["vertices"] == 7
    assert (tmp / "c.groups").read_text() == "p groups 2\ng 1 5 6\ng 2 7\n"
    code, rep = run(capsys, "solve", tmp / "c.graph", "--k", 3, "--constraints", tmp / "c.groups")
    assert rep["results"]["answer"] == "not-colorable"
    trace = json.loads((tmp / "c.trace.json").read_text())
    assert trace["groups"] == [[0, 4, 5], [1, 6]]


def test_solve_semi_matching_mode(capsys, files):
    tmp, p = files
    code, rep = run(capsys, "solve", p["k3"], "--k", 3, "--mode", "semi-matching")
    assert code == 0 and rep["results"]["coloring"] == "s 3\nv 1 1\nv 2 2\nv 3 3\n"


def test_solve_budget_exhausted(capsys, files):
    _, p = files
    code, rep = run(capsys, "solve", p["k3"], "--k", 4, "--budget", 1)
    assert code == 4 and rep["status"] == "budget-exhausted"


def test_check_reports_violation(capsys, files):
    tmp, p = files
    (tmp / "bad.col").write_text(format_coloring(KColoring(3, (1, 2, 3))))
    code, rep = run(capsys, "check", p["k3"], tmp / "bad.col", "--mode", "local")
    assert code == 1 and rep["results"]["violation"]["kind"] == "triple"
    assert rep["results"]["violation"]["vertices"] == [1, 2, 3]


def test_usage_and_parse_errors(capsys, files):
    tmp, p = files
    assert run(capsys, "reduce", p["xxx"], "--k", 2, "--out", tmp / "y")[0] == 2
    assert run(capsys, "reduce", p["xxx"], "--k", 3, "--mode", "proper", "--out", tmp / "y")[0] == 2
    (tmp / "bad.nae").write_text("p nae3 2 1\n1 2\n")
    code, rep = run(capsys, "reduce", tmp / "bad.nae", "--k", 3, "--out", tmp / "y")
    assert code == 3 and "line 2" in rep["results"]["error"]
    (tmp / "bad.graph").write_text("p edge 2 3\ne 1 2\n")
    assert run(capsys, "solve", tmp / "bad.graph", "--k", 3)[0] == 3
    (tmp / "bad.groups").write_text("g 9\n")
    assert run(capsys, "solve", p["k3"], "--k", 3, "--constraints", tmp / "bad.groups")[0] == 3
    assert run(capsys, "solve", tmp / "missing.graph", "--k", 3)[0] == 3


def test_argparse_errors_are_usage(capsys):
    assert main(["solve"]) == 2
    assert main(["frobnicate"]) == 2
    capsys.readouterr()


def test_reduce_full_without_gamma_is_not_found(capsys, files):
    tmp, p = files
    code, rep = run(capsys, "reduce", p["xxx"], "--k", 6, "--out", tmp / "big")
    assert code == 4 and rep["status"] == "not-found"


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "thrc", "--n-max", 5],
        ["verify", "gadgets", "--k", "3..5", "--construct-k", "3..8"],
        ["verify", "gamma"],
        ["verify", "equality", "--count", 10],
        ["verify", "e2e", "--k", "3", "--vars", 1, "--clauses", 1, "--count", 5],
        ["verify", "validators", "--count", 50],
        ["verify", "derived"],
    ],
)
def test_verify_suites_pass(capsys, argv):
    code, rep = run(capsys, *argv)
    assert code == 0 and rep["results"]["passed"], rep


def test_verify_rejects_small_k(capsys):
    assert run(capsys, "verify", "gadgets", "--k", "2..4")[0] == 2


def test_gamma_search_uses_cache(capsys, tmp_path):
    code, rep = run(capsys, "gamma-search", "--tau", 3, "--cache", tmp_path)
    assert code == 0 and rep["results"]["vertices"] == 5
    g = parse_graph(rep["results"]["graph"])
    for mode in Mode:
        assert validate(g, parse_coloring(rep["results"]["witnesses"][mode.value], g.n), mode)


def test_report_is_sorted_json_and_round_trips(capsys, files):
    _, p = files
    main(["solve", str(p["k3"]), "--k", "4"])
    text = capsys.readouterr().out
    data = json.loads(text)
    assert list(data) == sorted(data)
    assert set(data["inputs"]) == {str(p["k3"])} and len(data["inputs"][str(p["k3"])]) == 64
    rep = RunReport.from_json(text)
    assert rep.to_json() == text.rstrip("\n")
