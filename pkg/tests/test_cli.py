import csv
import json
import subprocess
import sys

import jsonschema
import pytest

from exocert import cli
from exocert.certificate import load_schema

SCHEMA = load_schema()


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    payload = json.loads(out)
    jsonschema.validate(payload, SCHEMA)
    return code, payload


def test_schema_is_valid():
    jsonschema.Draft202012Validator.check_schema(SCHEMA)


def test_elliptic_exotic(capsys):
    code, cert = run_json(capsys, "elliptic", "--n", "4", "--i", "1", "--j", "11", "--check", "exotic")
    assert code == 0 and cert["verdict"] == "CERTIFIED"
    witness = next(n for n in cert["nodes"] if n["name"] == "32 | c₁(s), SW odd")["witness"]
    assert witness["basic_class"]["coeff"] == 32


def test_elliptic_dehn_fails(capsys):
    code, cert = run_json(capsys, "elliptic", "--n", "4", "--i", "1", "--j", "11", "--check", "dehn")
    assert code == 1 and cert["verdict"] == "NOT CERTIFIED"


def test_text_table(capsys):
    code, out, _ = run(capsys, "elliptic", "--n", "2", "--check", "dehn")
    assert code == 0
    assert "PASS" in out and out.strip().endswith("verdict: CERTIFIED")


def test_ci(capsys):
    code, cert = run_json(capsys, "ci", "--degrees", "8,29", "--check", "exotic")
    assert code == 0 and cert["surface"]["degrees"] == [8, 29]
    code, _ = run_json(capsys, "ci", "--ambient", "3", "--degrees", "5", "--check", "exotic")
    assert code == 1


def test_exceptional_set(capsys):
    code, payload = run_json(capsys, "exceptional-set", "--variant", "2", "--bound", "15")
    assert code == 0 and len(payload["pairs"]) == 13
    code, out, _ = run(capsys, "exceptional-set", "--variant", "1", "--bound", "15")
    assert out.splitlines()[0] == "(1,1)"


def test_dehn_loop(capsys, tmp_path):
    trace = tmp_path / "lift.csv"
    code, payload = run_json(capsys, "verify-dehn-loop", "--samples", "4096", "--trace", str(trace))
    assert code == 0 and payload["verdict"] == "nontrivial"
    assert payload["commutator_class"] == 1 and payload["full_turn_class"] == 1
    assert payload["relation_max_error"] <= 1e-12 and payload["homotopy_endpoints_ok"]
    rows = list(csv.reader(trace.open()))
    assert rows[0][0] == "t" and len(rows) == 4097 + 1
    code, out, _ = run(capsys, "verify-dehn-loop", "--samples", "1024")
    assert "π₁ class: nontrivial" in out


def test_search(capsys):
    code, payload = run_json(capsys, "search", "--ambient", "3", "--max-degree", "40",
                             "--target", "dehn")
    assert code == 0 and payload["results"] == [[4], [36]]


def test_aliases(capsys):
    assert run(capsys, "ci", "search", "--ambient", "3", "--max-degree", "40",
               "--target", "dehn")[1].splitlines()[-1] == "2 found"
    code, out, _ = run(capsys, "elliptic", "exceptional-set", "--variant", "2", "--bound", "3")
    assert code == 0 and out.split() == ["(1,1)", "(1,3)"]


def test_selftest_subset(capsys):
    code, payload = run_json(capsys, "selftest", "--only", "spinlift")
    assert code == 0 and [c["id"] for c in payload["criteria"]] == [9]


@pytest.mark.parametrize("argv", [
    ["elliptic", "--n", "4", "--check", "exotic", "--bogus"],
    ["elliptic", "--n", "4", "--i", "3", "--j", "9", "--check", "exotic"],
    ["ci", "--degrees", "4,x", "--check", "dehn"],
    ["ci", "--ambient", "5", "--degrees", "4", "--check", "dehn"],
    ["search", "--ambient", "6", "--max-degree", "100", "--target", "exotic",
     "--max-candidates", "10"],
    ["nonsense"],
    [],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_output_deterministic_across_processes():
    argv = [sys.executable, "-m", "exocert", "ci", "--degrees", "8,29", "--check", "exotic",
            "--json", "--seed", "7"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a
