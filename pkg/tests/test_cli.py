import io
import json
import subprocess
import sys

import pytest

from stabledecomp.cli import FPMOD_COMMANDS, ORACLE_OPS, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue()


def machine(*argv):
    code, text = call(*argv, "--machine")
    return code, json.loads(text)


def test_decompose_report():
    code, rep = machine("decompose", "--ring", "int", "--relations", "[[2,0],[0,0]]")
    assert code == 0
    assert rep["result"]["proj"]["text"] == "Z"
    assert rep["result"]["stab"]["text"] == "Z/2"
    assert rep["result"]["splitting"]["matrix"] == [[0], [1]]
    assert set(rep) == {"command", "input", "normalization", "provenance", "result"}
    assert rep["input"][0]["relations"] == [[2, 0], [0, 0]]


def test_oracle_jacobson_on_idealization():
    code, rep = machine("oracle", "jacobson", "--ring", "idealization(z2^3)")
    assert code == 0 and rep["result"]["is_ideal"]
    # {0} x S: the base coordinate is zero in every listed element
    assert len(rep["result"]["J"]) == 2
    assert all(label.startswith("((0,0,0),") for label in rep["result"]["J"])


def test_counterexample_command():
    code, rep = machine("remark37")
    assert code == 0 and rep["result"]["counterexample_holds"]
    code, rep = machine("remark37", "--a", "1")
    assert code == 1 and rep["error"]["kind"] == "domain_error"


@pytest.mark.parametrize("cmd", FPMOD_COMMANDS)
def test_every_fpmod_command_runs(cmd):
    argv = [cmd, "--ring", "int", "--relations", "[[2,0],[0,3]]"]
    if cmd in {"ext1", "tor1", "hom", "tensor", "equiv", "verify-mu-epsilon"}:
        argv += ["--relations2", "[[4]]"]
    code, rep = machine(*argv)
    assert code == 0 and rep["command"] == cmd and rep["provenance"]


@pytest.mark.parametrize("op", [o for o in ORACLE_OPS if o != "predicates"])
def test_every_oracle_command_runs(op):
    code, rep = machine("oracle", op, "--ring", "z4", "--relations", "[[2]]")
    assert code == 0 and rep["command"] == f"oracle {op}"


def test_oracle_predicates():
    code, rep = machine("oracle", "predicates", "--ring", "z4", "--submodule", "[0,2]")
    assert code == 0
    assert rep["result"]["essential"] and rep["result"]["small"]
    # a subset that is not a submodule is well formed but invalid
    code, rep = machine("oracle", "predicates", "--ring", "z4", "--submodule", "[0,1]")
    assert code == 1 and rep["error"]["kind"] == "domain_error"


def test_file_input(tmp_path):
    f = tmp_path / "m.txt"
    f.write_text("ring poly 5\ngenerators 1\nrelations 1\n[4,0,1]\n")
    code, rep = machine("udim", "--file", str(f))
    assert code == 0 and rep["result"]["udim"] == 2
    g = tmp_path / "m.json"
    g.write_text(json.dumps([{"engine": "int", "generators": 1, "relations": [[4]]},
                             {"engine": "int", "generators": 1, "relations": [[6]]}]))
    code, rep = machine("hom", "--file", str(g))
    assert code == 0 and rep["result"]["hom"]["text"] == "Z/2"


@pytest.mark.parametrize("argv", [
    ["invariants", "--ring", "int", "--relations", "[[2,"],
    ["invariants", "--ring", "rationals", "--relations", "[[2]]"],
    ["invariants", "--ring", "int"],
    ["hom", "--ring", "int", "--relations", "[[2]]"],
    ["invariants", "--file", "/nonexistent/file"],
    ["suite", "no-such-suite"],
    ["frobnicate"],
])
def test_malformed_input_exits_2(argv):
    code, _ = call(*argv)
    assert code == 2


def test_engine_mismatch_exits_2(tmp_path):
    f = tmp_path / "two.txt"
    f.write_text("ring int\ngenerators 1\nrelations 1\n2\n---\nring mod 4\ngenerators 1\nrelations 1\n2\n")
    code, _ = call("hom", "--file", str(f))
    assert code == 2


def test_cap_exceeded_exits_1(monkeypatch):
    monkeypatch.setenv("STABLEDECOMP_CAPS", "ring=512,module=4")
    out = subprocess.run([sys.executable, "-m", "stabledecomp", "oracle", "submodules", "--ring", "z8",
                          "--machine"], capture_output=True, text=True)
    assert out.returncode == 1
    assert json.loads(out.stdout)["error"]["kind"] == "cap_exceeded"


def test_output_is_byte_identical():
    argv = ["verify-mu-epsilon", "--ring", "int", "--relations", "[[4]]", "--relations2", "[[6]]"]
    assert call(*argv) == call(*argv)
    assert call(*argv, "--machine") == call(*argv, "--machine")
    suite = ["suite", "corollary38", "--seed", "7", "--count", "20", "--machine"]
    first = call(*suite)
    assert first[0] == 0 and first == call(*suite)


def test_suite_human_summary():
    code, text = call("suite", "corollary38", "--seed", "7", "--count", "5")
    assert code == 0
    lines = text.splitlines()
    assert "PASS" in lines[0]
    assert all(json.loads(line) for line in lines[1:])


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "stabledecomp", "invariants", "--ring", "int",
                          "--relations", "[[2,4],[6,8]]"], capture_output=True, text=True)
    assert out.returncode == 0 and "Z/2 + Z/4" in out.stdout
