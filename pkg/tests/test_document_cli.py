import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from fmanifolds.chart import validate
from fmanifolds.cli import main, run
from fmanifolds.construct import catalog
from fmanifolds.document import ChartDocument, DocumentError, dump_chart, load_chart, parse_chart

GOLDEN = Path(__file__).parent / "golden"


def i2_doc(m=4):
    st = {f"{i},{j},{k}": "0" for i in (1, 2) for j in (1, 2) for k in (1, 2)}
    st.update({"1,1,1": "1", "1,2,2": "1", "2,1,2": "1", "2,2,1": f"t2^{m - 2}" if m > 3 else "t2"})
    return {
        "schema_version": 1,
        "dimension": 2,
        "coordinates": ["t1", "t2"],
        "unit_index": 1,
        "structure": st,
        "euler": {"components": ["t1", f"{2}/{m} * t2"], "weight": "1"},
        "metric": [["0", "1"], ["1", "0"]],
    }


def write(tmp_path, data, name="chart.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return str(p)


# --- documents ------------------------------------------------------------------------------

@pytest.mark.parametrize("name,params", [("I2", {"m": 5}), ("An", {"n": 3}), ("D4", {}), ("A1n", {"n": 3}),
                                         ("threeSheet", {"p2": 3, "p3": 2})])
def test_round_trip_is_bit_exact(name, params):
    e = catalog(name, **params)
    text = dump_chart(e.chart, e.euler)
    doc = parse_chart(text)
    assert doc.dumps() == text
    assert doc.chart == e.chart


def test_round_trip_with_metric():
    text = parse_chart(i2_doc(4)).dumps()
    assert parse_chart(text).dumps() == text
    assert '"metric"' in text


def test_document_matches_catalog():
    doc = parse_chart(i2_doc(4))
    assert doc.chart == catalog("I2", m=4).chart
    assert doc.euler.field == catalog("I2", m=4).euler.field


def test_missing_key_named():
    d = i2_doc()
    del d["structure"]["2,2,1"]
    with pytest.raises(DocumentError, match="'2,2,1'"):
        parse_chart(d)


@pytest.mark.parametrize("mutate,pattern", [
    (lambda d: d["structure"].update({"3,1,1": "0"}), "unexpected key"),
    (lambda d: d.update(schema_version=2), "schema_version"),
    (lambda d: d.update(dimension=3), "dimension"),
    (lambda d: d.update(unit_index=3), "unit_index"),
    (lambda d: d.pop("unit_index"), "unit_index"),
    (lambda d: d["structure"].update({"1,2,1": "t1 +"}), r"structure\['1,2,1'\]"),
    (lambda d: d["structure"].update({"1,2,1": 1.5}), "polynomial string"),
    (lambda d: d.update(metric=[["1", "0"], ["0", "0"]]), "metric"),
    (lambda d: d.update(metric=[["1", "t1"], ["0", "1"]]), "metric"),
    (lambda d: d.update(euler={"components": ["t1"]}), "euler"),
    (lambda d: d.update(euler={"components": ["t1", "t2"], "weight": "x"}), "euler.weight"),
])
def test_document_errors(mutate, pattern):
    d = i2_doc()
    mutate(d)
    with pytest.raises(DocumentError, match=pattern):
        parse_chart(d)


def test_invalid_json_and_missing_file(tmp_path):
    with pytest.raises(DocumentError, match="invalid JSON"):
        parse_chart("{")
    with pytest.raises(DocumentError, match="no such file"):
        load_chart(tmp_path / "nope.json")


def test_unit_vector_document():
    e = catalog("A1n", n=2)
    text = dump_chart(e.chart, e.euler)
    assert '"unit"' in text and "unit_index" not in text
    assert parse_chart(text).chart == e.chart


# --- CLI exit codes ---------------------------------------------------------------------------

def test_verify_ok(tmp_path):
    code, rep = run(["verify", write(tmp_path, i2_doc())])
    assert code == 0 and rep["passed"] and rep["schema_version"] == 1


def test_verify_unit_violation(tmp_path, capsys):
    d = i2_doc()
    d["structure"]["1,2,2"] = d["structure"]["2,1,2"] = "2"
    code = main(["verify", write(tmp_path, d)])
    assert code == 1
    rep = json.loads(capsys.readouterr().out)
    assert not rep["passed"]
    fails = rep["checks"]["validate"]["failures"]
    assert fails[0]["identity"] == "unit" and fails[0]["witness"] == "1"
    assert not validate(parse_chart(d).chart).passed


def test_usage_errors(capsys):
    assert run(["bogus"])[0] == 2
    assert run([])[0] == 2
    assert run(["verify"])[0] == 2
    assert run(["verify", "x.json", "--catalog", "I2"])[0] == 2
    assert run(["catalog", "list", "--dump"])[0] == 2
    assert run(["verify", "--catalog", "I2", "--param", "m"])[0] == 2
    assert capsys.readouterr().out == ""


def test_input_errors(tmp_path, capsys):
    assert run(["verify", str(tmp_path / "missing.json")])[0] == 3
    assert run(["verify", write(tmp_path, "{not json")])[0] == 3
    assert run(["verify", "--catalog", "Nope"])[0] == 3
    assert run(["decompose", "--catalog", "I2", "--point", "1,2,3"])[0] == 3
    assert run(["decompose", "--catalog", "I2", "--point", "1,zz"])[0] == 3
    d = i2_doc()
    del d["metric"]
    assert run(["metric-check", write(tmp_path, d)])[0] == 3
    err = capsys.readouterr().err
    assert "input error" in err


def test_ll_i2_5():
    code, rep = run(["ll", "--catalog", "I2", "--param", "m=5"])
    assert code == 0
    assert rep["lambda"] == ["-2 * t1", "-4/25 * t2^5 + t1^2"]
    assert rep["determinant_identity"]


def test_ll_composed_reports_substitution():
    code, rep = run(["ll", "--catalog", "I2", "--param", "m=3", "--composed"])
    assert code == 0 and "bifurcation" not in rep
    assert rep["bifurcation_composed"]["substitution"] == {"a1": "Lambda_1", "a2": "Lambda_2"}


def test_decompose_at_origin():
    code, rep = run(["decompose", "--catalog", "I2", "--param", "m=3", "--point", "0,0"])
    assert code == 0 and rep["partition"] == [2] and not rep["semisimple"]
    code, rep = run(["decompose", "--catalog", "I2", "--param", "m=3", "--point", "0.3,1"])
    assert code == 0 and rep["partition"] == [1, 1]


def test_decompose_ambiguity_exit_1():
    code, rep = run(["decompose", "--catalog", "I2", "--param", "m=4", "--point", "0,0.01", "--tol", "1e-3"])
    assert code == 1 and "tolerance ambiguity" in rep["error"]


def test_frobenius_and_reconstruct():
    code, rep = run(["frobenius-test", "--catalog", "An", "--param", "n=3", "--point", "0,0,0"])
    assert code == 0 and rep["frobenius"]
    code, rep = run(["reconstruct", "--catalog", "D4", "--point", "0.3,-0.2,0.5,0.1"])
    assert code == 0 and rep["max_abs_error"] < 1e-7


def test_caustic_and_logcheck():
    code, rep = run(["caustic", "--catalog", "nilpotent2d"])
    assert code == 1 and "error" in rep
    code, rep = run(["caustic", "--catalog", "I2", "--param", "m=3", "--method", "trace"])
    assert code == 0 and "t2" in rep["caustic"]
    code, rep = run(["logcheck", "--catalog", "I2", "--param", "m=4"])
    assert code == 0


def test_metric_check(tmp_path):
    code, rep = run(["metric-check", write(tmp_path, i2_doc(3))])
    assert code == 0 and rep["frobenius"] and rep["D"] == "5/3"
    d = i2_doc(3)
    d["metric"] = [["1", "0"], ["0", "1"]]
    code, rep = run(["metric-check", write(tmp_path, d)])
    assert code == 1 and not rep["checks"]["invariance"]["passed"]


def test_catalog_list_and_dump(capsys):
    code, rep = run(["catalog", "list"])
    names = {e["name"] for e in rep["entries"]}
    assert code == 0 and {"I2", "An", "Bn", "D4", "H3", "H4", "F4", "A1n"} <= names
    assert main(["catalog", "D4", "--dump"]) == 0
    out = capsys.readouterr().out
    assert parse_chart(out).chart == catalog("D4").chart
    assert run(["catalog", "I2", "--param", "m=1"])[0] == 3


def test_slice_csv(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, rep = run(["slice", "--catalog", "I2", "--param", "m=3", "--vars", "1,2", "--grid", "5", "--out", str(out)])
    assert code == 0 and rep["rows"] == 25
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["t1", "t2", "value"] and len(rows) == 26
    t1, t2, v = map(float, rows[7])
    assert v == pytest.approx(t1 ** 2 - 4 / 9 * t2 ** 3)
    assert main(["slice", "--catalog", "I2", "--vars", "1,2", "--grid", "3", "--out", "-"]) == 0
    text = capsys.readouterr().out
    assert list(csv.reader(io.StringIO(text)))[0] == ["t1", "t2", "value"]
    assert run(["slice", "--catalog", "I2", "--vars", "1,1", "--grid", "3", "--out", "-"])[0] == 2


def test_slice_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        run(["slice", "--catalog", "An", "--param", "n=3", "--vars", "2,3", "--grid", "4", "--out", str(p),
             "--base", "0.5,0,0"])
    assert a.read_bytes() == b.read_bytes()


# --- golden reports ----------------------------------------------------------------------------

GOLDEN_RUNS = {
    "verify_I2_3": ["verify", "--catalog", "I2", "--param", "m=3"],
    "verify_A3": ["verify", "--catalog", "An", "--param", "n=3"],
    "verify_D4": ["verify", "--catalog", "D4"],
    "ll_I2_3": ["ll", "--catalog", "I2", "--param", "m=3"],
    "ll_A3": ["ll", "--catalog", "An", "--param", "n=3"],
    "ll_D4": ["ll", "--catalog", "D4", "--composed"],
}


@pytest.mark.parametrize("name", sorted(GOLDEN_RUNS))
def test_golden(name):
    code, rep = run(GOLDEN_RUNS[name])
    assert code == 0
    assert rep == json.loads((GOLDEN / f"{name}.json").read_text())


def test_golden_i2_3_values():
    rep = json.loads((GOLDEN / "ll_I2_3.json").read_text())
    # x^2 - 2 t1 x + t1^2 - 4/9 t2^3 has discriminant 16/9 t2^3
    assert rep["bifurcation"] == "16/9 * t2^3"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fmanifolds", "ll", "--catalog", "I2", "--param", "m=4"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["lambda"] == ["-2 * t1", "-1/4 * t2^4 + t1^2"]
    proc = subprocess.run([sys.executable, "-m", "fmanifolds", "nope"], capture_output=True, text=True, timeout=60)
    assert proc.returncode == 2 and proc.stdout == "" and proc.stderr


def test_unknown_variable_names_key():
    d = i2_doc()
    d["structure"]["2,2,1"] = "t3"
    with pytest.raises(DocumentError, match=r"structure\['2,2,1'\].*unknown variable 't3'"):
        parse_chart(d)


def test_text_format(capsys):
    assert main(["--format", "text", "verify", "--catalog", "I2", "--param", "m=3"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("schema_version: 1\ncommand: verify\npassed: True\n")
    assert "  integrability:\n    check: integrability\n    passed: True" in out
    assert run(["--format", "xml", "verify", "--catalog", "I2"])[0] == 2
