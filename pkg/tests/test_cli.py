import csv
import io
import json
import subprocess
import sys

import pytest

from patavoid.cli import BUDGET, FOUND, OK, USAGE, main
from patavoid.search import enumerate_avoiders


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_check_exit_codes(capsys):
    code, rep = run_json(capsys, "check", "--formula", "AA", "--word", "010")
    assert code == OK and rep["results"]["avoids"]
    code, rep = run_json(capsys, "check", "--formula", "ABA.BAB", "--word", "01010")
    assert code == FOUND and rep["results"]["witness"] == {"A": "0", "B": "1"}
    w = str(enumerate_avoiders("AAB.BBAA", 2, 30).witness_longest)
    code, _ = run_json(capsys, "check", "--formula", "AAB.BBAA", "--word", w)
    assert code == OK


def test_report_fields(capsys):
    _, rep = run_json(capsys, "morphic", "--name", "b3", "--length", "12")
    assert set(rep) == {"command", "parameters", "results", "version", "convention", "wall_time"}
    assert rep["results"]["prefix"] == "012021012102"


def test_usage_errors(capsys):
    assert main(["check", "--formula", "AB", "--word", "01"]) == USAGE
    assert main(["check", "--formula", "AA", "--word", "012"]) == USAGE
    assert main(["image", "--morphism", "nope", "--word", "0"]) == USAGE
    assert main(["verify", "--formula", "ABAAB"]) == USAGE
    with pytest.raises(SystemExit) as e:
        main(["check", "--formula", "AA", "--word", "0", "--bogus"])
    assert e.value.code == USAGE


def test_divides(capsys):
    code, rep = run_json(capsys, "divides", "--big", "ABAABB", "--small", "ABA.AABB")
    assert code == OK and rep["results"]["divisible"]
    code, rep = run_json(capsys, "divides", "--big", "AA", "--small", "ABA.BAB")
    assert code == FOUND and not rep["results"]["divisible"]


def test_image(capsys):
    _, rep = run_json(capsys, "image", "--morphism", "g_y", "--word", "012")
    assert rep["results"]["image"] == "01110100"


def test_verify_file_path(capsys):
    code, rep = run_json(capsys, "verify", "--morphism", "data/m_abaab.txt", "--formula", "ABAAB",
                         "--reverse", "--sq", "3")
    assert code == OK
    (claim,) = rep["results"]["claims"]
    assert claim["verdict"] in ("certified", "bounded-only") and len(claim["formulas"]) == 2
    code, rep = run_json(capsys, "verify", "--morphism", "m_aa-abab-bb", "--formula", "AA.ABAB.BB",
                         "--sq", "3")
    assert code == FOUND and rep["results"]["claims"][0]["verdict"] == "refuted"


def test_enumerate_json_csv_consistent(capsys):
    args = ["enumerate", "--formula", "AAB.BBAA", "--limit", "30"]
    code, rep = run_json(capsys, *args)
    assert code == OK and rep["results"]["max_length"] == 22 and rep["results"]["total"] == 1428
    _, out = run(capsys, *args, "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["length", "count"]
    assert {r[0]: int(r[1]) for r in rows[1:]} == rep["results"]["counts"]


def test_enumerate_budget_and_constraints(capsys):
    code, _ = run_json(capsys, "enumerate", "--formula", "AAA", "--limit", "80", "--node-budget", "100")
    assert code == BUDGET
    code, rep = run_json(capsys, "enumerate", "--formula", "AA.ABA.ABBA", "--forbid", "010",
                         "--forbid", "0110", "--limit", "200")
    assert code == OK and rep["results"]["max_length"] == 19
    code, rep = run_json(capsys, "enumerate", "--sq", "1", "--alphabet", "3", "--limit", "12")
    assert rep["results"]["counts"]["5"] == 30


def test_classify_not_avoidable(capsys):
    code, _ = run(capsys, "classify", "--formula", "AA", "--limit", "20")
    assert code == FOUND
    code, rep = run_json(capsys, "classify", "--formula", "ABA.AABB")
    assert rep["results"]["label"] == "polynomial"


def test_essential_small(capsys):
    code, rep = run_json(capsys, "essential", "--generator", "b3", "--alphabet", "3", "--forbid", "010",
                         "--forbid", "212", "--sq", "1", "--length", "8", "--margin", "8")
    assert code == OK and rep["results"]["passed"]
    assert main(["essential", "--forbid", "010"]) == USAGE


def test_catalog(capsys):
    code, rep = run_json(capsys, "catalog")
    res = rep["results"]
    assert code == OK and len(res["claims"]) == 20
    assert {m["name"] for m in res["morphisms"]} >= {"b3", "g_y", "m_abaab"}
    _, out = run(capsys, "catalog", "--format", "csv")
    assert len(list(csv.reader(io.StringIO(out)))) == len(res["formulas"]) + 1


def test_module_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "patavoid", "morphic", "--name", "g_y(b3)", "--length", "30",
           "--format", "csv"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert a == b and "01110100" in a
