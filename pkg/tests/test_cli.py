import csv
import json

import pytest

from artifact.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_rank2_route(capsys):
    code, rep = run(capsys, "count", "--route", "rank2", "--shape", "0,0", "--profile", "1,1,1,1")
    assert code == 0
    assert rep["polynomial"] == [4, 1] and rep["text"] == "q + 4"


def test_brute_route(capsys):
    code, rep = run(capsys, "count", "--route", "brute", "--q", "2", "--shape", "0,0", "--profile", "1,1,1", "--flags", "full")
    assert code == 0 and rep["value"] == 1


def test_formula_route_evaluates(capsys):
    code, rep = run(capsys, "count", "--shape", "0,0", "--profile", "2,2", "--flags", "full", "--q", "7")
    assert rep["polynomial"] == [0, 1]
    assert rep["evaluations"] == {"7": 7}


def test_explicit_points(capsys):
    code, rep = run(capsys, "count", "--route", "brute", "--q", "2", "--shape", "0,0",
                    "--points", "0,1;1,1;inf", "--mu", "11/11/11")
    assert rep["inputs"]["profile"] == [1, 1, 1] and rep["value"] == 1


def test_hua_suite_passes(capsys):
    code, rep = run(capsys, "verify", "--suite", "hua", "--q", "2", "--nmax", "1", "--profile", "1,1,1")
    assert code == 0 and rep["ok"] is True


def test_degree_sum_suite(capsys):
    code, rep = run(capsys, "verify", "--suite", "degree-sum", "--profile", "1,1,1,1")
    assert rep["ok"] and rep["report"]["sum"] == [5, 1]


def test_higgs_fourier(capsys):
    code, rep = run(capsys, "higgs", "--route", "fourier", "--q", "3", "--shape", "0,0", "--profile", "2,1", "--flags", "full")
    assert rep["x"] == 24 and rep["paut"] == 24 and rep["x_over_paut"] == 1


def test_no_generic_tuple_reports_error(capsys):
    code, rep = run(capsys, "higgs", "--q", "2", "--shape", "0,0", "--profile", "2,1", "--flags", "full")
    assert code == 2
    assert rep["error"] == "GenericityError"


def test_missing_mu_is_an_error(capsys):
    code, rep = run(capsys, "count", "--shape", "0,0", "--profile", "1,1")
    assert code == 2 and "mu" in rep["message"]


@pytest.mark.parametrize("argv", [["kostka", "--nu", "1,1", "--lam", "2"], ["kostka", "--nu", "11", "--lam", "2"], ["kostka", "--n", "2"]])
def test_kostka(capsys, argv):
    code, rep = run(capsys, *argv)
    assert code == 0


def test_csv_output(capsys, tmp_path):
    path = tmp_path / "out.csv"
    main(["--csv", str(path), "count", "--route", "rank2", "--shape", "1,0", "--profile", "3"])
    capsys.readouterr()
    rows = dict(csv.reader(path.open()))
    assert rows["field"] == "value"
    assert json.loads(rows["polynomial"]) == [1]
