from __future__ import annotations

import json
import subprocess
import sys

import pytest

from contract_es.cli import cli_main

from conftest import DATA

TOYS = str(DATA / "toys.contract")


def run(capsys, *argv):
    code = cli_main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_agree(capsys):
    code, out, _ = run(capsys, "agree", TOYS)
    assert code == 0
    assert "configuration: {a,b,c}" in out
    code, _, _ = run(capsys, "agree", str(DATA / "toys_standard.contract"))
    assert code == 1


def test_agree_json(capsys):
    code, out, _ = run(capsys, "agree", TOYS, "--json")
    assert json.loads(out) == {
        "agreed": True,
        "configuration": ["a", "b", "c"],
        "witnesses": {"A": ["b"], "B": ["c"], "C": ["a", "b"]},
    }


def test_check(capsys):
    code, out, _ = run(capsys, "check", TOYS, "--state", "a")
    assert code == 1 and "not a configuration" in out
    code, out, _ = run(capsys, "check", TOYS, "--state", "a,b,c", "--json")
    data = json.loads(out)
    assert code == 0 and data["configuration"] is True
    assert [s["event"] for s in data["witness"]] == ["c", "b", "a"]


def test_reach(capsys):
    code, out, _ = run(capsys, "reach", TOYS)
    assert code == 0 and out.split() == ["a", "b", "c"]
    code, out, _ = run(capsys, "reach", str(DATA / "circular.contract"), "--json")
    assert json.loads(out) == {"reachable": []}


def test_duties(capsys):
    code, out, _ = run(capsys, "duties", TOYS, "--state", "c", "--json")
    assert code == 0
    assert json.loads(out) == {
        "state": ["c"],
        "duties": {"A": [], "B": ["b"], "C": []},
        "culpable": ["B"],
        "fulfilled": ["B"],
    }
    code, out, _ = run(capsys, "duties", TOYS, "--participant", "C")
    assert "{c}" in out


def test_theorem3(capsys):
    assert run(capsys, "theorem3", TOYS)[1].strip() == "ok"
    code, _, err = run(capsys, "theorem3", str(DATA / "toys_standard.contract"))
    assert code == 2 and "no agreement" in err


def test_encode_and_prove(capsys):
    code, out, _ = run(capsys, "encode", TOYS)
    assert out.strip().startswith("(A says ((B says b) -> a))")
    code, out, _ = run(capsys, "prove", TOYS, "--goal", "c", "--print-proof")
    assert code == 0 and "proved" in out and "cimp-L" in out
    code, out, _ = run(capsys, "prove", str(DATA / "toys_standard.contract"), "--goal", "a", "--json")
    assert code == 1 and json.loads(out)["status"] == "refuted-by-saturation"
    code, out, _ = run(capsys, "prove", str(DATA / "toys_standard.contract"), "--goal", "a", "--hyp", "c")
    assert code == 0
    code, out, _ = run(capsys, "prove", "--formula", "(a -->> a) -> a")
    assert code == 0
    code, out, _ = run(capsys, "prove", "--assume", "b -> a", "--assume", "a -> b", "--formula", "a")
    assert code == 1


def test_session(capsys):
    code, out, _ = run(capsys, "session", TOYS, "--strategy", "C=dishonest-after:0")
    assert code == 1 and "culpable {C}" in out
    parts = [str(DATA / f"toys_{p}.contract") for p in "ABC"]
    code, out, _ = run(capsys, "session", *parts, "--json", "--strategy", "A=lazy,B=honest")
    assert code == 0 and json.loads(out)["verdict"] == "all-fulfilled"


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", str(DATA / "toys_A.contract"))
    assert code == 0 and "never-fulfilled" in out


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["agree"],
        ["agree", "/nonexistent.contract"],
        ["check", TOYS, "--state", "zz"],
        ["duties", TOYS, "--participant", "Z"],
        ["prove", "--formula", "a ->"],
        ["prove", TOYS],
        ["session", TOYS, "--strategy", "C=sneaky"],
        ["session", str(DATA / "toys_standard.contract")],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "contract_es", "agree", TOYS], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "agreed: yes" in proc.stdout
