import csv
import io
import json
from fractions import Fraction as F

import pytest

from dottie import verify
from dottie.cli import run
from dottie.precision import MethodResult
from dottie.series import CoefficientTable, kaplan_coefficients_reversion


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_compute_newton_32():
    code, out, _ = call("compute", "--method", "newton", "--precision", "32")
    assert code == 0
    assert out.strip() == "0.73908513321516064165531208767387"


@pytest.mark.parametrize("method", ["kepler", "beta", "bertrand", "kaplan", "cosine_iteration"])
def test_compute_json_round_trip(method):
    code, out, _ = call("compute", "--method", method, "--precision", "20", "--format", "json")
    assert code == 0
    rec = MethodResult.from_json(out)
    assert rec.method == method
    assert json.loads(out) == rec.to_dict()


def test_compute_csv():
    code, out, _ = call("compute", "--precision", "12", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert rows[0]["value"] == "0.739085133215"


def test_coeffs_json():
    code, out, _ = call("coeffs", "--max-n", "11", "--format", "json")
    assert code == 0
    records = json.loads(out)
    assert {"n": 11, "num": "-60623", "den": "669692775628800"} in records
    assert CoefficientTable.from_records(records) == kaplan_coefficients_reversion(11)


def test_coeffs_lagrange_text():
    code, out, _ = call("coeffs", "--max-n", "7", "--method", "lagrange")
    assert code == 0
    assert "165150720" in out


def test_coeffs_even_max_n_is_usage_error():
    code, _, err = call("coeffs", "--max-n", "10")
    assert code == 2
    assert "usage" in err


def test_unknown_flag_rejected():
    code, _, err = call("compute", "--colour", "red")
    assert code == 2
    assert "unrecognized" in err


def test_unknown_method_and_subcommand():
    assert call("compute", "--method", "abacus")[0] == 2
    assert call("integrate")[0] == 2
    assert call("compute", "--precision", "3")[0] == 2


def test_convergence_kaplan_json():
    code, out, _ = call("convergence", "--method", "kaplan", "--terms", "8", "--format", "json",
                        "--precision", "30")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert len(rows) == 8
    errs = [float(r["abs_error"]) for r in rows]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_convergence_counts_and_empty():
    code, out, _ = call("convergence", "--method", "cosine_iteration", "--counts", "10,20,40",
                        "--format", "csv", "--precision", "20")
    assert code == 0
    assert [r["terms"] for r in csv.DictReader(io.StringIO(out))] == ["10", "20", "40"]


def test_approx_json():
    code, out, _ = call("approx", "--precision", "30")
    assert code == 0
    recs = json.loads(out)
    assert {r["name"]: r["correct_decimal_digits"] for r in recs} == {
        "tangent": 3, "broukhis": 6, "hammond": 8}


def test_engel_json():
    code, out, _ = call("engel", "--precision", "200", "--terms", "20")
    assert code == 0
    payload = json.loads(out)
    assert payload["terms"][:5] == [2, 3, 3, 4, 5]
    assert len(payload["terms"]) == 20
    assert not payload["truncated"]
    assert float(payload["reconstruction_error"]) < 1e-40


def test_out_path(tmp_path):
    target = tmp_path / "d.txt"
    code, out, _ = call("compute", "--precision", "15", "--out", str(target))
    assert code == 0
    assert out == ""
    assert target.read_text().strip() == "0.739085133215161"


def test_guard_digits_env(monkeypatch):
    monkeypatch.setenv("DOTTIE_GUARD_DIGITS", "40")
    code, out, _ = call("compute", "--precision", "32")
    assert code == 0
    assert out.strip() == "0.73908513321516064165531208767387"
    monkeypatch.setenv("DOTTIE_GUARD_DIGITS", "2")
    assert call("compute", "--precision", "32")[0] == 2


def test_verify_pi_series_csv():
    code, out, _ = call("verify", "pi-series", "--terms", "500", "--precision", "20")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["k", "x", "N", "estimate", "reference", "gap", "tail_bound", "result"]
    assert len(rows) == 12
    assert all(r["result"] == "PASS" for r in rows)


def _corrupted(n_max):
    table = kaplan_coefficients_reversion(n_max)
    entries = tuple((n, v * 2 if n == 3 else v) for n, v in table.entries)
    return CoefficientTable(entries, "reversion")


def test_verify_fails_on_corrupted_coefficient(monkeypatch):
    monkeypatch.setattr(verify, "kaplan_coefficients_reversion", _corrupted)
    code, out, _ = call("verify", "--precision", "40", "--format", "json")
    assert code == 1
    failed = {(r["method"], r["check"]) for r in json.loads(out) if r["status"] == "FAIL"}
    assert ("coefficients", "a_03 reversion") in failed
    assert ("combined", "a_n exact AND pi^n identity") in failed


def test_verify_report_rows_sorted_and_parse_back():
    code, out, _ = call("verify", "--precision", "40", "--format", "json")
    assert code == 0
    rows = [verify.Check(**r) for r in json.loads(out)]
    assert rows == sorted(rows, key=lambda r: (r.method, r.check))
    assert not verify.any_failed(rows)
    notes = [r for r in rows if r.status == "NOTE"]
    assert any(r.check == "a_09 as printed" for r in notes)
