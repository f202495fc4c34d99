"""Command-line surface: dispatch, exit codes, machine-readable output."""

import json
import os

import jsonschema
import pytest

from abelsum.cli import (
    EXIT_INPUT_ERROR,
    EXIT_NOT_SUMMABLE,
    EXIT_PASS,
    EXIT_VERIFY_FAIL,
    main,
)

SCHEMA_PATH = os.path.join(os.path.dirname(__file__), "..", "docs", "output-schema.json")
with open(SCHEMA_PATH) as fh:
    SCHEMA = json.load(fh)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return code, doc, err


# -- gosper ------------------------------------------------------------------


def test_gosper_certificate(capsys):
    code, doc, _ = run_json(capsys, "gosper", "--term", "rat(1/(k*(k+1)))")
    assert code == EXIT_PASS
    assert doc["summable"] is True
    assert doc["certificate"] == "(-1)*k + -1"


def test_gosper_not_summable_exit(capsys):
    code, doc, _ = run_json(capsys, "gosper", "--term", "rat(1/k)")
    assert code == EXIT_NOT_SUMMABLE
    assert doc == {"command": "gosper", "summable": False}


def test_gosper_with_param(capsys):
    code, doc, _ = run_json(
        capsys, "gosper", "--term", "(-1)^(k-1) * C(n,k) * C(k,p)",
        "--param", "p=1",
    )
    assert code == EXIT_PASS
    assert doc["summable"] is True


# -- zeilberger / wz ---------------------------------------------------------


def test_zeilberger_json(capsys):
    code, doc, _ = run_json(capsys, "zeilberger", "--term", "C(n,k)^2")
    assert code == EXIT_PASS
    assert doc["recurrence"]["order"] == 1
    assert len(doc["recurrence"]["coeffs"]) == 2


def test_zeilberger_order_cap(capsys):
    code, doc, _ = run_json(
        capsys, "zeilberger", "--term", "C(n,k)^3", "--max-order", "1"
    )
    assert code == EXIT_NOT_SUMMABLE
    assert doc["found"] is False


def test_wz_json(capsys):
    code, doc, _ = run_json(
        capsys, "wz", "--term", "C(n,k)", "--closed-form", "2^(n)"
    )
    assert code == EXIT_PASS
    assert doc["found"] is True


# -- sum / abel-step ---------------------------------------------------------


def test_sum_with_value_and_trace(capsys):
    code, doc, _ = run_json(
        capsys, "sum", "--term", "rat(1)", "--weight", "H(k)",
        "--from", "1", "--to", "n", "--n", "5", "--trace",
    )
    assert code == EXIT_PASS
    # (n+1) H_n - n at n = 5
    assert doc["value_at_n"] == {"n": 5, "value": "87/10"}
    assert doc["trace"]


def test_abel_step_json(capsys):
    code, doc, _ = run_json(
        capsys, "abel-step", "--term", "(-1)^(k-1) * C(n,k)",
        "--weight", "H(k)^2", "--from", "1", "--to", "n",
    )
    assert code == EXIT_PASS
    assert doc["transformed_count"] == len(doc["transformed"]) == 2


# -- verify / catalog --------------------------------------------------------


def test_verify_single_entry(capsys):
    code, doc, _ = run_json(capsys, "verify", "--id", "sum-Hk")
    assert code == EXIT_PASS
    assert doc["passed"] is True


def test_verify_negative_control_exit_code(capsys):
    code, doc, _ = run_json(capsys, "verify", "--id", "thm1-corrupt")
    assert code == EXIT_VERIFY_FAIL
    assert doc["passed"] is False
    assert "first_failure" in doc["report"][0]


def test_verify_unknown_id(capsys):
    code, out, err = run(capsys, "verify", "--id", "no-such-entry")
    assert code == EXIT_NOT_SUMMABLE
    assert "no-such-entry" in err


def test_verify_needs_selection(capsys):
    code, out, err = run(capsys, "verify")
    assert code == EXIT_INPUT_ERROR


def test_verify_file_flag(capsys):
    code, doc, _ = run_json(
        capsys, "verify", "--file", os.path.join("src", "abelsum", "data", "catalog.toml")
    )
    assert code == EXIT_PASS
    assert doc["passed"] is True


def test_catalog_env_var(capsys, tmp_path, monkeypatch):
    alt = tmp_path / "one.toml"
    alt.write_text(
        '[[entry]]\nid = "tiny"\nterm = "C(n,k)"\nlower = "0"\n'
        'upper = "n"\nrhs = "2^n"\nn_min = "0"\nn_max = 5\npipeline = "none"\n'
    )
    monkeypatch.setenv("ABELSUM_CATALOG", str(alt))
    code, doc, _ = run_json(capsys, "catalog", "list")
    assert code == EXIT_PASS
    assert [e["id"] for e in doc["entries"]] == ["tiny"]


def test_catalog_list_schema(capsys):
    code, doc, _ = run_json(capsys, "catalog", "list")
    assert code == EXIT_PASS
    assert len(doc["entries"]) >= 28


# -- input errors ------------------------------------------------------------


def test_syntax_error_exit_code(capsys):
    code, out, err = run(capsys, "gosper", "--term", "C(n,")
    assert code == EXIT_INPUT_ERROR
    assert "input error" in err


def test_bad_param_exit_code(capsys):
    code, out, err = run(capsys, "gosper", "--term", "C(k,p)", "--param", "p")
    assert code == EXIT_INPUT_ERROR


def test_unbound_param_exit_code(capsys):
    code, out, err = run(capsys, "gosper", "--term", "C(k,p)")
    assert code == EXIT_INPUT_ERROR
    assert "unbound parameter" in err
