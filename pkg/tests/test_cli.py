import io
import json
import subprocess
import sys

import pytest

from qmode.cli import run
from qmode.mde import MDEOperator, indicial_polynomial
from qmode.schemas import ERROR, OPERATOR, validate, validate_envelope
from qmode.series import QSeries


def call(argv, environ=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err, environ=environ or {})
    return code, out.getvalue(), err.getvalue()


def test_expand_e4():
    code, out, _ = call(["expand", "--series", "E4", "--order", "5"])
    assert code == 0
    doc = json.loads(out)
    assert doc["payload"]["expansion"]["coefficients"] == ["1", "240", "2160", "6720", "17520"]
    assert doc["exactness"]["truncation"] == 5
    validate_envelope(doc)


def test_expand_delta_text():
    code, out, _ = call(["expand", "--series", "Delta", "--order", "4", "--format", "text"])
    assert code == 0 and out.strip() == "q - 24q^2 + 252q^3 + O(q^4)"


def test_extremal_text():
    code, out, _ = call(["extremal", "--weight", "6", "--depth", "1", "--order", "3", "--format", "text"])
    assert code == 0 and out.startswith("q + 18q^2")


def test_extremal_json_round_trips():
    code, out, _ = call(["extremal", "--weight", "12", "--depth", "4", "--order", "8"])
    doc = json.loads(out)
    assert doc["payload"]["depth"] == 4
    s = QSeries.from_json(doc["payload"]["expansion"])
    assert s.valuation == 5 and s[5] == 1


def test_check_denominators():
    code, out, _ = call(["check", "denominators", "--depth", "1", "--max-weight", "60", "--order", "30"])
    assert code == 0
    report = json.loads(out)["payload"]
    assert len(report) == 28 and all(row["pass"] for row in report)


def test_balanced_command():
    code, out, _ = call(["balanced", "--weight", "12", "--depth", "2", "--exponents", "2,1,0", "--order", "6"])
    assert code == 0
    report = json.loads(out)["payload"]["report"]
    assert report["observed"] == [2, 1, 0] and report["kernel_dimension"] == 1


def test_operator_file_round_trip(tmp_path):
    code, out, _ = call(["mde-from-exponents", "--weight", "6", "--depth", "1", "--exponents", "1,0"])
    assert code == 0
    op = json.loads(out)["payload"]
    validate(op, OPERATOR)
    path = tmp_path / "op.json"
    path.write_text(json.dumps(op))
    K = MDEOperator.from_json(json.loads(path.read_text()))
    assert K.to_json() == op
    assert set(indicial_polynomial(K).exponents()) == {0, 1}
    code, out, _ = call(["solve", "--operator", str(path), "--order", "10"])
    assert code == 0
    doc = json.loads(out)
    assert doc["payload"]["exponents"] == [1, 0]
    assert doc["payload"]["fundamental_system"]["z_degrees"] == [0, 1]
    code, out, _ = call(["solve", "--operator", str(path), "--exponent", "1", "--order", "4"])
    assert json.loads(out)["payload"]["solution"]["coefficients"][:2] == ["1", "18"]


def test_solve_accepts_envelope(tmp_path):
    _, out, _ = call(["mde-from-exponents", "--weight", "6", "--depth", "1", "--exponents", "1,0"])
    path = tmp_path / "op.json"
    path.write_text(out)
    code, out, _ = call(["solve", "--operator", str(path), "--order", "10"])
    assert code == 0 and json.loads(out)["payload"]["exponents"] == [1, 0]


def test_normalized_flag_with_nonunit_leading(tmp_path):
    _, out, _ = call(["mde-from-exponents", "--weight", "6", "--depth", "1", "--exponents", "1,0"])
    op = json.loads(out)["payload"]
    op["coeffs"][0]["monomials"] = {"0,0": "3"}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(op))
    code, out, err = call(["solve", "--operator", str(path)])
    assert code == 1 and out == ""
    doc = json.loads(err)
    validate(doc, ERROR)
    assert doc["error"] == "schema"


def test_malformed_operator_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"weight": 6,\n  "depth_bound": }')
    code, _, err = call(["solve", "--operator", str(path)])
    doc = json.loads(err)
    assert code == 1 and doc["details"]["line"] == 2
    path.write_text(json.dumps({"weight": 6, "depth_bound": 1, "coeffs": [{"weight": 0, "monomials": {"x": "1"}}]}))
    code, _, err = call(["solve", "--operator", str(path)])
    assert code == 1 and "coeffs" in json.loads(err)["message"]
    code, _, err = call(["solve", "--operator", str(tmp_path / "missing.json")])
    assert code == 1


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["expand", "--series", "E3"],
    ["expand", "--series", "E4", "--order", "0"],
    ["extremal", "--weight", "12", "--depth", "5"],
    ["extremal", "--weight", "12"],
    ["balanced", "--weight", "12", "--depth", "2", "--exponents", "a,b"],
    ["check", "numerators", "--depth", "1"],
    ["expand", "--series", "E4", "--bogus"],
])
def test_usage_errors(argv):
    code, out, err = call(argv)
    assert code == 2 and out == "" and err


@pytest.mark.parametrize("argv", [
    ["balanced", "--weight", "12", "--depth", "2", "--exponents", "3,3,3"],
    ["extremal", "--weight", "4", "--depth", "1"],
    ["mde-from-exponents", "--weight", "8", "--depth", "1", "--exponents", "1,0"],
])
def test_domain_errors(argv):
    code, out, err = call(argv)
    assert code == 1 and out == ""
    validate(json.loads(err), ERROR)


def test_order_resolution():
    _, out, _ = call(["expand", "--series", "E6"])
    assert json.loads(out)["exactness"]["truncation"] == 50
    _, out, _ = call(["expand", "--series", "E6"], environ={"QMODE_ORDER": "7"})
    assert json.loads(out)["exactness"]["truncation"] == 7
    _, out, _ = call(["expand", "--series", "E6", "--order", "3"], environ={"QMODE_ORDER": "7"})
    assert json.loads(out)["exactness"]["truncation"] == 3
    code, _, _ = call(["expand", "--series", "E6"], environ={"QMODE_ORDER": "seven"})
    assert code == 2


def test_output_is_deterministic():
    argv = ["extremal", "--weight", "20", "--depth", "3", "--order", "12"]
    assert call(argv)[1] == call(argv)[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qmode", "expand", "--series", "E4", "--order", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payload"]["expansion"]["coefficients"] == ["1", "240", "2160"]
    proc = subprocess.run([sys.executable, "-m", "qmode", "nope"], capture_output=True, text=True, check=False)
    assert proc.returncode == 2
