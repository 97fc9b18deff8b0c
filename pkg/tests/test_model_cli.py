import io
import json
import os
import subprocess
import sys

import pytest

from flasquekit.cli import run, to_jsonable
from flasquekit.errors import ParseError, ValidationError
from flasquekit.model import model_to_json, parse_model, parse_model_text

HERE = os.path.dirname(__file__)
C2_MODEL = os.path.join(HERE, "..", "demos", "models", "c2_sign.json")


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, obj, name="model.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


# -- model files -----------------------------------------------------------------

def test_model_roundtrip():
    model = parse_model(C2_MODEL)
    first = model_to_json(model)
    again = model_to_json(parse_model_text(json.dumps(first)))
    assert first == again
    assert first["lattices"]["ZC2"] == {"cosets": [[]]}
    assert model.module("ZC2").permutation is not None


@pytest.mark.parametrize("patch,pointer", [
    ({"group": {"degree": 2, "generators": [[0, 0]]}}, "/group/generators"),
    ({"lattices": {"bad": {"rank": 1, "action": {"g0": [[2]]}}}}, "/lattices/bad/action"),
    ({"lattices": {"bad": {"rank": 1, "action": {"g0": [[1, 0]]}}}}, "/lattices/bad/action/g0/0"),
    ({"lattices": {"bad": {"rank": 1, "action": {}}}}, "/lattices/bad/action"),
    ({"lattices": {"bad": {"rank": 1, "action": {"g0": [[1.5]]}}}}, "/lattices/bad/action/g0/0/0"),
    ({"maps": {"f": {"source": "nope", "target": "Z2", "matrix": [[1]]}}}, "/maps/f/source"),
    ({"maps": {"f": {"source": "ZC2", "target": "Z2", "matrix": [[1, 0]]}}}, "/maps/f/matrix"),
    ({"modules": {"ZC2": {"rank": 1, "relations": [[2]], "action": {"g0": [[1]]}}}}, "/modules/ZC2"),
])
def test_validation_errors_carry_json_pointers(patch, pointer):
    with open(C2_MODEL) as fh:
        base = json.load(fh)
    for k, v in patch.items():
        if isinstance(base.get(k), dict) and k != "group":
            base[k] = {**base[k], **v}
        else:
            base[k] = v
    with pytest.raises(ValidationError) as info:
        parse_model_text(json.dumps(base))
    assert info.value.pointer == pointer


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_model_text("{not json")
    with pytest.raises(ParseError):
        parse_model("/nonexistent/model.json")


def test_large_integers_are_strings():
    assert to_jsonable(2**53) == str(2**53)
    assert to_jsonable(2**53 - 1) == 2**53 - 1
    assert to_jsonable(-(2**60)) == str(-(2**60))


# -- command line ----------------------------------------------------------------

def test_cohomology_command():
    code, out, _ = cli("cohomology", "--model", C2_MODEL, "--module", "Zminus", "--degree", "1")
    assert code == 0
    report = json.loads(out)
    rows = report["results"]["results"]
    assert [r["group"]["invariant_factors"] for r in rows] == [[], [2]]
    assert set(report) == {"command", "inputs_digest", "tool_version", "seed", "results"}


def test_json_output_is_deterministic():
    a = cli("resolve", "--model", C2_MODEL, "--module", "Zminus", "--seed", "3")[1]
    b = cli("resolve", "--model", C2_MODEL, "--module", "Zminus", "--seed", "3")[1]
    assert a == b
    assert json.loads(a)["results"]["resolution"]["certified"] is True


def test_text_format():
    code, out, _ = cli("cohomology", "--model", C2_MODEL, "--module", "Z2", "--degree", "0",
                       "--format", "text")
    assert code == 0 and "Z/2" in out


def test_classify_and_torus_commands():
    code, out, _ = cli("classify", "--model", C2_MODEL, "--module", "Zminus")
    res = json.loads(out)["results"]
    assert code == 0
    assert res["coflasque"]["holds"] is False and res["permutation"]["value"] == "no"
    code, out, _ = cli("torus", "requiv", "--model", C2_MODEL, "--characters", "Zminus")
    assert code == 0 and json.loads(out)["results"]["count_order"] == 1
    code, out, _ = cli("torus", "norm-one", "--model", C2_MODEL)
    assert code == 0 and json.loads(out)["results"]["lattice"]["rank"] == 1


def test_homspace_commands():
    code, out, _ = cli("homspace", "construct", "--model", C2_MODEL, "--restriction", "restrict")
    res = json.loads(out)["results"]
    assert code == 0 and res["u_permutation"]["value"] == "yes"
    code, out, _ = cli("homspace", "invariants", "--model", C2_MODEL, "--restriction", "restrict")
    assert code == 0 and json.loads(out)["results"]["pic_group"]["invariant_factors"] == []
    code, out, _ = cli("homspace", "count", "--model", C2_MODEL, "--restriction", "restrict",
                       "--g-classes", "2")
    assert code == 0 and json.loads(out)["results"]["total_lower_bound"] == 2


def test_exit_codes(tmp_path):
    assert cli("cohomology", "--module", "Zminus")[0] == 64                 # no model
    assert cli("no-such-command")[0] == 64
    assert cli("cohomology", "--model", C2_MODEL, "--module", "Zminus", "--subgroup", "9")[0] == 64
    assert cli("homspace", "count", "--model", C2_MODEL, "--restriction", "restrict",
               "--g-classes", "0")[0] == 64
    code, out, _ = cli("cohomology", "--model", C2_MODEL, "--module", "missing")
    assert code == 2 and json.loads(out)["error"]["pointer"] == "/missing"
    code, out, _ = cli("cohomology", "--model", C2_MODEL, "--module", "Z2", "--degree", "2")
    assert code == 2 and json.loads(out)["error"]["kind"] == "TorsionUnsupportedDegree"
    bad = write(tmp_path, {"group": {"degree": 2, "generators": [[1, 0]]},
                           "lattices": {"M": {"rank": 1, "action": {"g0": [[-1]]}}},
                           "maps": {"f": {"source": "M", "target": "M", "matrix": [[1]]}}})
    code, out, _ = cli("homspace", "construct", "--model", bad, "--restriction", "f")
    assert code == 3 and json.loads(out)["error"]["kind"] == "ConstructionFailure"


def test_selftest_exit_code():
    code, out, _ = cli("selftest")
    assert code == 0 and json.loads(out)["results"]["passed"] is True


def test_group_order_limit_from_environment(tmp_path):
    path = write(tmp_path, {"group": {"degree": 4, "generators": [[1, 2, 3, 0], [1, 0, 2, 3]]},
                            "lattices": {}})
    env = {**os.environ, "FLASQUEKIT_MAX_GROUP_ORDER": "12"}
    proc = subprocess.run([sys.executable, "-m", "flasquekit", "torus", "norm-one", "--model", path],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 2
    assert json.loads(proc.stdout)["error"]["pointer"] == "/group/generators"
