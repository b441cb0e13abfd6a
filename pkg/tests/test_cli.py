import io
import json
import shutil
import subprocess

import pytest

from torfan.cli import parse_assignment, run
from torfan.coefficients import ParamSpec
from torfan.fan import catalog_fan
from torfan.fgl import FormalGroupLaw
from torfan.sralgebra import SRRing


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run(list(argv), out, err)
    return status, out.getvalue(), err.getvalue()


def call_json(*argv):
    status, out, _ = call(*argv, "--format", "json")
    return status, json.loads(out)


def write_json(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_ordinary_pn_relation():
    status, out, _ = call("ordinary", "--fan", "pn:2", "--fgl", "mult:v", "--specialize", "v=1")
    assert status == 0
    assert "x3^3" in out
    assert "# fgl: mult:v" in out and "# specialize: v=1" in out and "# N: 6" in out
    assert "graded ranks (degree 0..3): 1 1 1 0" in out


def test_ordinary_json_ranks_and_tau():
    status, doc = call_json("ordinary", "--fan", "dp6", "--tau", "E1,L3")
    assert status == 0
    assert doc["result"]["graded_ranks"] == [1, 4, 1, 0]
    assert len(doc["result"]["variables"]) == 4


def test_ordinary_with_parameter_omits_ranks():
    status, doc = call_json("ordinary", "--fan", "pn:2", "--fgl", "mult:v")
    assert status == 0 and "graded_ranks" not in doc["result"]
    assert doc["meta"] == {"command": "ordinary", "fan": "pn:2", "fgl": "mult:v", "N": 6}


def test_pic_dp6():
    status, out, _ = call("pic", "--fan", "dp6")
    assert status == 0
    assert "Pic = Z^4; free rank 4, torsion none" in out
    status, doc = call_json("pic", "--fan", "dp6")
    assert doc["result"]["free_rank"] == 4 and doc["result"]["torsion"] == []


def test_model_pn():
    status, doc = call_json("model", "--fan", "pn:3")
    assert status == 0
    assert doc["result"]["variables"] == ["x1", "x2", "x3", "x4"]
    assert len(doc["result"]["relations"]) == 1


def test_selftest_empty_catalog():
    status, out, _ = call("selftest", "--catalog", "")
    assert status == 0
    assert out.splitlines()[-1] == "selftest: 0 checks, 0 failed"


def test_selftest_subset():
    status, doc = call_json("selftest", "--catalog", "pn:2,dp6")
    assert status == 0
    assert doc["result"] == {"checks": 14, "failed": [], "passed": True}


def test_unknown_catalog_in_selftest():
    assert call("selftest", "--catalog", "nonsense")[0] == 3


def test_determinism():
    argv = ("glue-check", "--fan", "dp6", "--fgl", "mult:v", "--seed", "5", "--format", "json")
    assert call(*argv) == call(*argv)
    argv = ("blowup", "--fan", "pn:3", "--center", "0,1,2", "--samples", "3")
    assert call(*argv) == call(*argv)


def test_exit_codes():
    assert call("frobnicate")[0] == 2
    assert call("ordinary")[0] == 3                       # no --fan
    assert call("ordinary", "--fan", "no-such-fan")[0] == 3
    assert call("ordinary", "--fan", "pn:2", "--fgl", "bogus")[0] == 3
    assert call("ordinary", "--fan", "pn:2", "--specialize", "w=1")[0] == 3
    assert call("blowup", "--fan", "pn:2", "--center", "0,1", "--fgl", "lorentz:u2")[0] == 1
    assert call("ordinary", "--fan", "pn:2", "--truncate", "0")[0] == 3
    assert call("ordinary", "--fan", "pn:2", "--tau", "0")[0] == 1   # not full-dimensional


def test_bad_fan_file(tmp_path):
    path = write_json(tmp_path, "bad.json", {"rays": [[2, 0], [0, 1]], "max_cones": [[0, 1]]})
    status, _, err = call("ordinary", "--fan", path)
    assert status == 3 and "invalid fan" in err
    # validate reports the problem as a failed check
    status, doc = call_json("validate", "--fan", path)
    assert status == 1
    assert doc["result"]["valid"] is False
    assert doc["error"]["kind"] == "check"
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert call("validate", "--fan", str(broken))[0] == 3


def test_fan_file_round_trip(tmp_path):
    path = write_json(tmp_path, "dp6.json", catalog_fan("dp6").to_json())
    _, by_file = call_json("pic", "--fan", path)
    _, by_name = call_json("pic", "--fan", "dp6")
    assert by_file["result"] == by_name["result"]


def test_error_json_shape():
    status, doc = call_json("blowup", "--fan", "pn:2", "--center", "0,1", "--fgl", "lorentz:u2")
    assert status == 1
    assert doc["error"]["kind"] == "check"
    assert "x + y - v x y" in doc["error"]["message"]
    status, doc = call_json("ordinary", "--fan", "pn:9x")
    assert status == 3 and doc["error"]["kind"] == "parse"


def test_truncate_env_var(monkeypatch):
    monkeypatch.setenv("TORFAN_TRUNCATE", "4")
    _, doc = call_json("model", "--fan", "pn:2")
    assert doc["meta"]["N"] == 4
    _, doc = call_json("model", "--fan", "pn:2", "--truncate", "5")
    assert doc["meta"]["N"] == 5
    monkeypatch.setenv("TORFAN_TRUNCATE", "four")
    assert call("model", "--fan", "pn:2")[0] == 3


def test_blowup_report_and_metadata():
    status, out, _ = call("blowup", "--fan", "pn:3", "--center", "x1,x2,x3", "--samples", "4")
    assert status == 0
    assert "# center: cone(x1,x2,x3)" in out
    assert "# exceptional: E" in out
    assert "# push_forward_seeds:" in out
    assert "push/pull: 10 checks passed" in out


def test_blowup_apply(tmp_path):
    fan = catalog_fan("pn:2")
    F = FormalGroupLaw.from_selector("mult:v", 6)
    src = SRRing(fan, 6, F.params)
    elem = write_json(tmp_path, "f.json", src.gen(0).to_json())
    status, doc = call_json("blowup", "--fan", "pn:2", "--center", "0,1",
                            "--apply", "pullback", "--element", elem)
    assert status == 0
    # x1 -> x1 + E - v x1 E
    monos = sorted(tuple(sorted(t["monomial"].items())) for t in doc["result"]["element"])
    assert monos == [(("E", 1),), (("E", 1), ("x1", 1)), (("x1", 1),)]
    assert call("blowup", "--fan", "pn:2", "--center", "0,1", "--apply", "pullback")[0] == 3


def test_specialize_element(tmp_path):
    F = FormalGroupLaw.from_selector("mult:v", 6)
    R = SRRing(catalog_fan("pn:2"), 6, F.params)
    x1, x2, _ = R.gens()
    f = x1 * x2 * R.const(F.params.gen("v")) + x1
    elem = write_json(tmp_path, "f.json", f.to_json())
    status, out, _ = call("specialize", "--fan", "pn:2", "--fgl", "mult:v",
                          "--element", elem, "--specialize", "v=3")
    assert status == 0
    assert out.splitlines()[-1] == "x1 + 3*x1*x2"


def test_piecewise_command():
    status, out, _ = call("piecewise", "--fan", "pn:2", "--ray", "x1", "--point", "2,1")
    assert status == 0
    assert out.splitlines()[-1] == "value at [2, 1]: 2"
    status, doc = call_json("piecewise", "--fan", "pn:2", "--ray", "0", "--point", "0,1")
    assert doc["result"]["value"] == "0" and doc["result"]["compatible"]
    assert call("piecewise", "--fan", "cone:2", "--ray", "0", "--point=-1,0")[0] == 1
    assert call("piecewise", "--fan", "pn:2")[0] == 3


def test_glue_check_with_elements(tmp_path):
    R = SRRing(catalog_fan("dp6"))
    elem = write_json(tmp_path, "f.json", (R.gen(0) * R.gen(1) + 3).to_json())
    status, out, _ = call("glue-check", "--fan", "dp6", "--element", elem)
    assert status == 0 and "1 elements, 0 failures" in out
    bad = write_json(tmp_path, "bad.json", [{"monomial": {"zz": 1}, "coeff": 1}])
    assert call("glue-check", "--fan", "dp6", "--element", bad)[0] == 3


def test_parse_assignment_kinds():
    spec = ParamSpec(("v", "u2"))
    assignment, target = parse_assignment("v=unit:b,u2=-3", spec)
    assert target.names == ("b",) and target.invertible == {"b"}
    assert assignment["u2"] == target.const(-3)


@pytest.mark.skipif(shutil.which("torfan") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["torfan", "pic", "--fan", "dp6"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "free rank 4" in proc.stdout
    proc = subprocess.run(["torfan"], capture_output=True, text=True)
    assert proc.returncode == 2
