import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from towerlab.cli import EXIT_ASSERTION, EXIT_IO, EXIT_OK, EXIT_VALIDATION, build_parser, main
from towerlab.report import SCHEMA, render_json, render_text, to_jsonable


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count_json(capsys):
    code, out, _ = run_cli(capsys, "count", "--p", "2", "--n", "3", "--j", "1", "--k", "2", "--levels", "3")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["meta"] == {"schema": SCHEMA, "version": "0.1.0"}
    assert doc["report"]["counts"] == [7, 28, 112]


def test_validation_error_names_constraint(capsys):
    code, _, err = run_cli(capsys, "count", "--p", "2", "--n", "4", "--j", "2", "--k", "2")
    assert code == EXIT_VALIDATION
    assert "gcd(j,k) must be 1" in err
    code, _, err = run_cli(capsys, "count", "--p", "4", "--n", "3", "--j", "1", "--k", "2")
    assert code == EXIT_VALIDATION and "prime" in err
    code, _, _ = run_cli(capsys, "gv-scan", "--max-ell", "50")
    assert code == EXIT_VALIDATION


def test_gv_scan(capsys):
    code, out, _ = run_cli(capsys, "gv-scan", "--max-ell", "10000")
    assert code == EXIT_OK
    rep = json.loads(out)["report"]
    assert rep["exceptions"] == [8, 27, 32, 125]
    assert 343 in rep["original_form_exceptions"]


def test_bounds_json_and_csv(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--p", "2", "--n", "3")
    assert code == EXIT_OK
    (row,) = json.loads(out)["report"]["rows"]
    assert row["lambda"] == {"num": 3, "den": 2, "display": "3/2"}
    assert row["DV"] == "sqrt(8)-1" and row["verdict"] == "below-DV"
    code, out, _ = run_cli(capsys, "bounds", "--p", "3", "--n", "5", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    # 3 + 2 is stored as 2 + 3 because p divides 3
    assert [(r["q"], r["j"], r["k"]) for r in rows] == [("3", "1", "4"), ("3", "2", "3"), ("3", "4", "1")]
    assert rows[1]["lambda"] == "208/17"


def test_text_format_tags_approximations(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--p", "2", "--n", "3", "--format", "text")
    assert code == EXIT_OK
    assert "lambda: 3/2 (approx 1.5)" in out
    assert "b0: 10/3 (approx 3.33333)" in out


def test_ramcheck(capsys):
    code, out, _ = run_cli(capsys, "ramcheck", "--p", "2", "--n", "3", "--j", "1", "--k", "2")
    assert code == EXIT_OK
    rep = json.loads(out)["report"]
    assert rep["genus_F2"] == 6
    assert rep["figures"]["Q_delta"]["edges"]["top|x"] == {"e": 2, "d": 8}


def test_verify(capsys):
    code, out, _ = run_cli(capsys, "verify", "--p", "2", "--n", "2", "--j", "1", "--k", "1")
    assert code == EXIT_OK
    assert json.loads(out)["report"]["ok"] is True


def test_drinfeld_verify_reports_failure(capsys):
    code, out, err = run_cli(capsys, "drinfeld-verify", "--p", "2", "--n", "3", "--j", "1", "--k", "2")
    assert code == EXIT_ASSERTION
    rep = json.loads(out)["report"]
    assert rep["failures"] == ["pk-right-divisibility:q=2,n=3,j=1,k=2:GF(2^6)"]
    assert json.loads(err.strip().splitlines()[-1])["failures"] == rep["failures"]
    code, _, _ = run_cli(capsys, "drinfeld-verify", "--p", "3", "--n", "3", "--j", "1", "--k", "2")
    assert code == EXIT_OK


def test_io_error(capsys, tmp_path):
    target = tmp_path / "missing" / "out.json"
    code, _, err = run_cli(capsys, "bounds", "--p", "2", "--n", "3", "--output", str(target))
    assert code == EXIT_IO and "error" in err


def test_report_all_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    ca = main(["report-all", "--output", str(a)])
    cb = main(["report-all", "--output", str(b)])
    capsys.readouterr()
    assert ca == cb
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())["report"]
    assert [c["criterion"] for c in rep["criteria"]] == list(range(1, 9))


def test_empty_report_document():
    doc = json.loads(render_json({}))
    assert doc == {"meta": {"schema": SCHEMA, "version": "0.1.0"}, "report": {}}
    assert render_text({}).startswith("# tower-lab/1")


def test_serialize_values():
    assert to_jsonable(Fraction(6, 4)) == {"num": 3, "den": 2, "display": "3/2"}
    with pytest.raises(TypeError):
        to_jsonable(object())


def test_parser_requires_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "towerlab", "bounds", "--p", "2", "--n", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["report"]["rows"][0]["verdict"] == "meets-DV"
