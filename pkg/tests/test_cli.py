from __future__ import annotations

import json
from importlib import resources

import jsonschema
import pytest

from pary.cli import load_spectrum_csv, main
from pary.func import from_expr
from pary.walsh import walsh_fast

from conftest import DATA


def schema(name):
    return json.loads(resources.files("pary").joinpath(f"schemas/{name}.schema.json").read_text())


def run(capsys, *argv, fmt="json"):
    code = main([*argv, "--format", fmt])
    out = capsys.readouterr()
    if fmt == "json" and out.out.strip():
        return code, json.loads(out.out), out.err
    return code, out.out, out.err


def test_walsh_summary_example(capsys):
    code, obj, _ = run(capsys, "walsh", "--field", "3^3/[2,2,0,1]", "--func", "Tr(2*x - x^5)", "--summary")
    assert code == 0
    jsonschema.validate(obj, schema("walsh_summary"))
    assert {d["value"]["int"] for d in obj["nonzero_values"]} == {0, 9, -9}


def test_walsh_summary_norms(capsys):
    code, obj, _ = run(capsys, "walsh", "--field", "3^2", "--func", "Tr(x^2)", "--summary")
    assert code == 0 and obj["norms"] == [9] and obj["parseval"]
    assert sum(d["count"] for d in obj["nonzero_values"]) == 8


def test_walsh_full_zero_function(capsys):
    code, obj, _ = run(capsys, "walsh", "--field", "3^1", "--func", "Tr(0*x)", "--naive", "--verify")
    assert code == 0
    jsonschema.validate(obj, schema("walsh"))
    code, text, _ = run(capsys, "walsh", "--field", "3^1", "--func", "Tr(0*x)", fmt="text")
    assert [line.split("\t")[1] for line in text.strip().splitlines()] == ["3", "0", "0"]


def test_walsh_csv_round_trip(capsys, f27):
    code, text, _ = run(capsys, "walsh", "--field", "3^3/[2,2,0,1]", "--func", "Tr(2*x - x^5)", fmt="csv")
    assert code == 0
    spec = load_spectrum_csv(text)
    fresh = walsh_fast(from_expr("Tr(2*x - x^5)", f27))
    assert (spec.coeffs == fresh.coeffs).all() and spec.f_hash == fresh.f_hash


def test_scheme_example_negative(capsys):
    code, obj, _ = run(capsys, "scheme", "--field", "3^3/[2,2,0,1]", "--func", "Tr(2*x - x^5)")
    assert code == 1
    jsonschema.validate(obj, schema("scheme"))
    assert (obj["image_size"], obj["vset_size"]) == (3, 5)
    code, text, _ = run(capsys, "scheme", "--field", "3^3/[2,2,0,1]", "--func", "Tr(2*x - x^5)", fmt="text")
    assert "V-set size 5 != |I| = 3" in text


@pytest.mark.parametrize("field,func", [("3^4", "Tr(x^16)"), ("2^10", "Tr(x^31)")])
def test_scheme_positive_verified(capsys, field, func):
    code, obj, _ = run(capsys, "scheme", "--field", field, "--func", func, "--verify")
    assert code == 0 and obj["is_scheme"] and obj["class_count"] == 2
    assert obj["intersection_numbers"] is not None
    jsonschema.validate(obj, schema("scheme"))


def test_bent(capsys):
    code, obj, _ = run(capsys, "bent", "--field", "3^2", "--func", "Tr(x^2)")
    assert code == 0
    jsonschema.validate(obj, schema("bent"))
    assert obj["weakly_regular"] and set(obj["mu"]) == {-1}
    code, obj, _ = run(capsys, "bent", "--field", "3^3", "--func", "Tr(2*x - x^5)")
    assert code == 1 and obj["is_bent"] is False


def test_bent_witness_table(capsys):
    code, obj, _ = run(capsys, "bent", "--table", str(DATA / "bent_not_weakly_regular_3_6.txt"))
    assert code == 0 and obj["weakly_regular"] is False and obj["is_scheme"] is False
    jsonschema.validate(obj, schema("bent"))


def test_code_table_check(capsys, tmp_path):
    gm = tmp_path / "g.txt"
    code, obj, _ = run(capsys, "code", "--field", "3^4", "--func", "Tr(x^16)", "--level", "2",
                       "--table-check", "1", "--generator-matrix", str(gm))
    assert code == 0
    jsonschema.validate(obj, schema("code"))
    assert (obj["n"], obj["k"]) == (64, 4)
    assert obj["weights"] == {"0": 1, "42": 64, "48": 16}
    assert obj["table_check"]["match"]
    assert gm.read_text().splitlines()[0] == "4 64 3"
    code, text, _ = run(capsys, "code", "--field", "3^4", "--func", "Tr(x^16)", "--table-check", "1",
                        fmt="text")
    assert "MATCH" in text


def test_code_level(capsys):
    code, obj, _ = run(capsys, "code", "--field", "3^4", "--func", "Tr(x^16)", "--level", "1")
    assert code == 0 and obj["weights"] == {"0": 1, "6": 16, "12": 64}
    assert obj["routes"] == ["char_sum", "direct", "walsh"]


def test_family(capsys):
    code, obj, _ = run(capsys, "family", "--kind", "p46", "--p", "3", "--r", "7", "--m", "2")
    assert code == 0 and obj["class_count"] == 2 and obj["materializable"] is False
    assert obj["q"] == "3^42"
    jsonschema.validate(obj, schema("family"))
    code, obj, _ = run(capsys, "family", "--kind", "P48", "--p", "19", "--r", "5", "--run")
    assert code == 0 and obj["verified"]["class_count"] == 3
    jsonschema.validate(obj, schema("family"))


@pytest.mark.parametrize("argv,expected", [
    (["walsh", "--field", "3^3", "--func", "Tr()"], 2),
    (["walsh", "--field", "3^3"], 2),
    (["walsh", "--field", "4^2", "--func", "Tr(x)"], 2),
    (["walsh", "--field", "3^30", "--func", "Tr(x)"], 3),
    (["walsh", "--field", "2^15", "--func", "Tr(x)", "--naive"], 3),
    (["family", "--kind", "p46", "--p", "3", "--r", "7", "--m", "2", "--run"], 3),
    (["family", "--kind", "p46", "--p", "2", "--r", "7"], 2),
    (["code", "--field", "3^4", "--func", "Tr(x^16)", "--table-check", "4"], 2),
    (["bent", "--field", "2^4", "--func", "Tr(x^3)"], 2),
    (["scheme", "--field", "3^2", "--table", "/nonexistent/file"], 2),
])
def test_exit_codes(capsys, argv, expected):
    code, _, err = run(capsys, *argv)
    assert code == expected
    assert err.startswith("error:")


def test_deterministic_output(capsys):
    argv = ["scheme", "--field", "3^4", "--func", "Tr(x^16)", "--verify"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_cache_dir_reused(capsys, tmp_path):
    argv = ["walsh", "--field", "3^3", "--func", "Tr(x^2)", "--cache-dir", str(tmp_path)]
    first = run(capsys, *argv)[1]
    assert len(list(tmp_path.glob("*.wsp"))) == 1
    assert run(capsys, *argv)[1] == first
