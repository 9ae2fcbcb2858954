import json
from fractions import Fraction

import pytest

from cli_support import command_matrix, run_cli, write_inputs
from semiq.cli import EXIT_FAILS_TO_SPAN, EXIT_GUARD, EXIT_INPUT, EXIT_OK, EXIT_VERIFY, atomic_write, main


@pytest.fixture()
def inputs(tmp_path):
    return write_inputs(tmp_path)


def test_straighten_outputs(inputs, capsys):
    assert main(["straighten", str(inputs["monomial"]), "--pi", "1", "1"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert [t["rows"] for t in out["terms"]] == [[[1, 2], [3, 5], [4, 6]], [[2, 3], [1, 5], [4, 6]]]
    assert main(["straighten", str(inputs["unsorted"])]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    # [41][32] = [14][23] = [13][24] - [12][34]
    assert {tuple(map(tuple, t["rows"])): t["coeff"] for t in out["terms"]} == {
        ((1, 2), (3, 4)): "-1/1", ((1, 3), (2, 4)): "1/1"}


def test_eval_and_mdisc(inputs, capsys):
    assert main(["eval", str(inputs["expr"]), str(inputs["mats22"])]) == EXIT_OK
    Fraction(capsys.readouterr().out.strip())
    assert main(["mdisc", str(inputs["mdisc"])]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "2/1"


def test_rsk_round_trip(inputs, tmp_path, capsys):
    assert main(["rsk", str(inputs["diagram"])]) == EXIT_OK
    pq = json.loads(capsys.readouterr().out)
    back = tmp_path / "pq.json"
    back.write_text(json.dumps(pq))
    assert main(["rsk", str(back)]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["counts"] == [[2, 1, 0], [0, 2, 1], [1, 0, 2]]


def test_span_exit_codes(capsys):
    assert main(["span-check", "-n", "2", "-d", "2"]) == EXIT_FAILS_TO_SPAN
    assert json.loads(capsys.readouterr().out)["verdict"] == "FailsToSpan"
    assert main(["span-check", "-n", "2", "-d", "3"]) == EXIT_OK
    assert main(["span-check", "-n", "3", "-d", "9"]) == EXIT_GUARD


def test_rewrite_and_verify(inputs, tmp_path, capsys):
    cert = tmp_path / "cert.json"
    assert main(["rewrite", "--tableau", str(inputs["tableau"]), "--out", str(cert)]) == EXIT_OK
    assert main(["verify-cert", str(cert)]) == EXIT_OK
    assert capsys.readouterr().out == "valid\n"
    obj = json.loads(cert.read_text())
    obj["kernelPart"]["terms"][0]["coeff"] = "12345/1"
    obj["outputTerms"]["terms"].append({"tableau": obj["kernelPart"]["terms"][0]["tableau"], "coeff": "1/1"})
    cert.write_text(json.dumps(obj))
    assert main(["verify-cert", str(cert)]) == EXIT_VERIFY
    assert main(["rewrite", "--tableau", str(inputs["block"])]) == EXIT_INPUT
    assert main(["rewrite", "--tableau", str(inputs["tableau"]), "--max-labels", "4"]) == EXIT_GUARD


def test_input_errors(tmp_path, monkeypatch):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["canon", str(bad)]) == EXIT_INPUT
    assert main(["canon", str(tmp_path / "missing.json")]) == EXIT_INPUT
    assert main(["sweep", "--n-max", "3"]) == EXIT_INPUT
    assert main(["nonsense"]) == EXIT_INPUT
    bad.write_text(json.dumps({"n": 2, "d": 2, "cells": [[[1], [1]], [[3], [4]]]}))
    assert main(["canon", str(bad)]) == EXIT_INPUT
    monkeypatch.setenv("SEMIQ_GUARD_MAX_TABLEAUX", "lots")
    assert main(["span-check", "-n", "2", "-d", "2"]) == EXIT_INPUT


def test_atomic_write_replaces_target(tmp_path):
    target = tmp_path / "sub" / "f.txt"
    atomic_write(target, "one")
    atomic_write(target, "two")
    assert target.read_text() == "two"
    assert [p.name for p in target.parent.iterdir()] == ["f.txt"]


def test_entry_point_runs_as_module(inputs):
    res = run_cli("mdisc", inputs["mdisc"])
    assert res.returncode == 0 and res.stdout == "2/1\n"


def test_every_subcommand_succeeds(inputs, tmp_path):
    out = tmp_path / "out"
    for cmd in command_matrix(inputs, out):
        code = main(cmd)
        want = EXIT_FAILS_TO_SPAN if "span22.json" in cmd[-1] else EXIT_OK
        assert code == want, cmd
