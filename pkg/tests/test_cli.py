import json
import subprocess
import sys

import pytest

from chgraph.cli import RunConfig, run
from chgraph.core import InputError

from conftest import FIXTURES, spec


def fx(name):
    return str(FIXTURES / f"{name}.json")


def test_validate_frobenius(capsys):
    assert run(["validate", fx("frobenius2")]) == 0
    assert "nondegenerate_pairing" in capsys.readouterr().out


def test_getzler_block8(capsys):
    assert run(["check", "getzler", fx("block8"), "--degree", "3", "--format", "json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert {c["check"]: c["status"] for c in rep["checks"]}["pde.getzler_residual_zero"] == "pass"


def test_getzler_block7_skips(capsys):
    assert run(["check", "getzler", fx("block7"), "-d", "1", "--route", "pde", "--format", "json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert {c["check"]: c["status"] for c in rep["checks"]}["pde.getzler_residual_zero"] == "skipped"


def test_graphs_listing(capsys):
    assert run(["graphs", "--leaves", "4", "-g", "0", "--labels", "a,b,c,d"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert len(out) == 3 and all(len(c["edges"]) == 1 for c in out)


def test_potential_and_gamma(capsys):
    assert run(["potential", fx("block8"), "-d", "4", "--format", "json"]) == 0
    pot = json.loads(capsys.readouterr().out)["potential"]
    assert pot
    assert run(["gamma", fx("frobenius2"), "-d", "3", "--format", "json"]) == 0


@pytest.mark.parametrize("argv", [
    ["validate", "/nonexistent.json"],
    ["frobnicate"],
    ["validate", fx("frobenius2"), "-d", "0"],
    ["validate", fx("frobenius2"), "-d", "9"],
    ["check", "wdvv"],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == 2


def test_malformed_spec(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"dimension": 2,')
    assert run(["validate", str(p)]) == 2
    assert "error" in capsys.readouterr().err


def test_invalid_algebra_exit_one(tmp_path, capsys):
    s = spec("frobenius2")
    s["integral"] = ["0", "0"]
    p = tmp_path / "deg.json"
    p.write_text(json.dumps(s))
    assert run(["validate", str(p)]) == 1
    assert run(["all", str(p), "-d", "2"]) == 1


def test_degree_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("CHGRAPH_DEGREE", "2")
    assert run(["potential", fx("block8"), "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["degree"] == 2
    monkeypatch.setenv("CHGRAPH_DEGREE", "x")
    assert run(["potential", fx("block8")]) == 2


def test_slice_option(capsys):
    k3 = str(FIXTURES / "k3like.json")
    assert run(["check", "wdvv", k3, "-d", "1", "--slice", "1,x1,L", "--format", "json"]) == 0


def test_config_bounds():
    with pytest.raises(InputError):
        RunConfig("all", degree=12)


def test_all_is_deterministic():
    cmd = [sys.executable, "-m", "chgraph.cli", "all", fx("block6"), "-d", "3", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["passed"]
