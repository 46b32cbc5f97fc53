import io
import json
import re
import shutil
import subprocess
import sys

import pytest

from vflab.cli import run

CUSP_ROWS = '[{"a":1,"k":0,"exceptional":false},{"a":2,"k":1,"exceptional":true},' \
            '{"a":3,"k":2,"exceptional":true},{"a":6,"k":4,"exceptional":true}]'


def call(*argv, env=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def envelope(*argv):
    code, out, _ = call(*argv, "--json")
    return code, json.loads(out)


@pytest.fixture
def cusp_json(tmp_path):
    p = tmp_path / "cusp.json"
    p.write_text(CUSP_ROWS)
    return str(p)


class TestExamples:
    def test_bs(self):
        code, env = envelope("bs", "--f", "x^2+y^3", "--weights", "1/2,1/3")
        assert code == 0
        assert list(env) == ["status", "command", "result", "timing_ms"]
        assert env["status"] == "ok" and env["command"] == "bs"
        assert env["result"] == {"b": "(s+1)(s+5/6)(s+7/6)", "minimal_exponent": "5/6", "lct": "5/6"}
        assert isinstance(env["timing_ms"], int)

    def test_resolution_lct(self, cusp_json):
        code, env = envelope("resolution-lct", "--data", cusp_json)
        assert code == 0 and env["result"] == {"lct": "5/6"}

    def test_jumping(self):
        code, env = envelope("jumping", "--a", "2,3", "--bound", "1")
        assert env["result"] == {"jumping_numbers": ["1/3", "1/2", "2/3", "1"]}


class TestCommands:
    def test_oracle_b(self):
        code, env = envelope("oracle-b", "--f", "x^2+y^3", "--max-order", "3", "--max-sdeg", "3")
        assert code == 0
        assert env["result"]["b"] == "(s+1)(s+5/6)(s+7/6)" and env["result"]["verified"] is True

    def test_verify_beq(self):
        code, env = envelope("verify-beq", "--f", "x^2", "--b", "(s+1)(s+1/2)", "--max-sdeg", "0")
        assert env["result"] == {"b": "(s+1)(s+1/2)", "verified": True, "operator": "1/4*dx^2"}
        code, env = envelope("verify-beq", "--f", "x^2", "--b", "(s+1)")
        assert code == 0 and env["result"]["verified"] is False and env["result"]["operator"] is None

    def test_sigma(self):
        code, env = envelope("sigma", "--f", "x^3+y^4", "--weights", "1/3,1/4")
        assert env["result"]["sigma"] == ["0", "1/4", "1/3", "1/2", "7/12", "5/6"]
        assert env["result"]["milnor_number"] == 6

    def test_lct_and_min_exp(self):
        assert envelope("lct", "--a", "2,3")[1]["result"] == {"lct": "1/3"}
        assert envelope("lct", "--f", "x^2+y^2+z^2", "--weights", "1,1,1")[1]["result"] == {"lct": "1"}
        assert envelope("min-exp", "--f", "x^2+y^2+z^2", "--weights", "1,1,1")[1]["result"] == {
            "minimal_exponent": "3/2"}
        assert envelope("min-exp", "--b", "(s+1)")[1]["result"] == {"minimal_exponent": "inf"}

    def test_mult_ideal(self):
        code, env = envelope("mult-ideal", "--a", "2,3", "--lam", "1")
        assert env["result"] == {"multiplier_ideal": ["x^2*y^3"], "i_lambda": ["x*y^2"]}

    def test_root_bounds(self, cusp_json):
        code, env = envelope("root-bounds", "--data", cusp_json, "--L", "7")
        assert {"-1", "-5/6", "-7/6"} <= set(env["result"]["candidates"])
        code, env = envelope("root-bounds", "--data", cusp_json, "--which", "g_delta_bound")
        assert env["result"] == {"which": "g_delta_bound", "bound": "-5/6"}

    def test_tau_demo(self):
        code, env = envelope("tau-demo", "--f", "x^2", "--m", "2")
        assert env["result"]["match"] is True

    def test_vcheck(self):
        code, env = envelope("vcheck", "--a", "1,1", "--levels", "0:1:1/2", "--trunc-J", "2", "--trunc-D", "6")
        assert code == 0 and env["result"]["ok"] is True
        assert [lv["alpha"] for lv in env["result"]["levels"]] == ["0", "1/2", "1"]
        code, env = envelope("vcheck", "--smooth", "--levels", "0,1", "--trunc-J", "1", "--trunc-D", "3")
        assert env["result"]["ok"] is True

    def test_text_is_default(self):
        code, out, _ = call("jumping", "--a", "2,3", "--bound", "1")
        assert code == 0 and out == "jumping_numbers: 1/3, 1/2, 2/3, 1\n"


class TestErrors:
    def test_domain_error(self):
        code, env = envelope("bs", "--f", "x^2+y^3", "--weights", "1,1")
        assert code == 1
        assert env["status"] == "error" and env["error"]["type"] == "domain"
        assert env["result"] is None
        code, env = envelope("sigma", "--f", "x^2*y^2", "--weights", "1,1")
        assert code == 1
        code, env = envelope("oracle-b", "--f", "x^2+y^3", "--max-order", "1", "--max-sdeg", "1")
        assert code == 1

    def test_usage_errors(self):
        code, env = envelope("bs", "--f", "x + @", "--weights", "1")
        assert code == 2 and "column 5" in env["error"]["message"]
        assert envelope("bs", "--f", "x^2")[0] == 2
        assert call("frobnicate")[0] == 2
        assert call("bs", "--unknown-flag")[0] == 2
        assert envelope("resolution-lct", "--data", "/nonexistent.json")[0] == 2
        code, _, err = call("jumping", "--a", "2,3")
        assert code == 2 and err.startswith("error:")

    def test_time_budget(self, monkeypatch):
        monkeypatch.setenv("VFLAB_MAX_MS", "1")
        code, env = envelope("vcheck", "--a", "2,3", "--trunc-J", "3", "--trunc-D", "12")
        assert code == 1 and env["error"]["type"] == "time_budget"


def _normalized(text):
    return re.sub(r'"timing_ms": \d+', '"timing_ms": 0', text)


def test_json_byte_stable():
    argv = ["sigma", "--f", "x^3+y^4", "--weights", "1/3,1/4", "--json"]
    outs = [_normalized(call(*argv)[1]) for _ in range(3)]
    assert outs[0] == outs[1] == outs[2]


def test_console_script():
    exe = shutil.which("vflab")
    cmd = [exe] if exe else [sys.executable, "-m", "vflab.cli"]
    out = subprocess.run(cmd + ["jumping", "--a", "2,3", "--bound", "1", "--json"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["result"]["jumping_numbers"][0] == "1/3"
