import io
import json
import os
import subprocess
import sys

import pytest

from minbasis import DegreeProfile, make_poly_matrix, random_matrix
from minbasis import experiments
from minbasis.cli import main, parse_grid

DATA = os.path.join(os.path.dirname(__file__), "data")
EXAMPLE = os.path.join(DATA, "example_m4n3.json")
LAMBDA_LAMBDA = os.path.join(DATA, "lambda_lambda.json")
ONE_LAMBDA = os.path.join(DATA, "one_lambda.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def ftsr_file(tmp_path):
    path = tmp_path / "ftsr.json"
    path.write_text(random_matrix(DegreeProfile.parse("4,3:0,1,1,2"), 17).to_json())
    return str(path)


def test_analyze_example(capsys):
    code, out, _ = run(capsys, "analyze", "-i", EXAMPLE)
    assert code == 0
    doc = json.loads(out)
    assert doc["r"] == [6, 12, 16]
    assert doc["alpha"] == [1, 0, 2]
    assert doc["isMinimalBasis"] is True and doc["isFTSR"] is False


def test_analyze_text_format(capsys):
    code, out, _ = run(capsys, "analyze", "-i", EXAMPLE, "--format", "text")
    assert code == 0
    assert "dPrime: 2" in out and "isFTSR: false" in out


def test_certify_not_minimal_is_success(capsys):
    code, out, _ = run(capsys, "certify", "-i", LAMBDA_LAMBDA)
    assert code == 0
    doc = json.loads(out)
    assert doc["isMinimalBasis"] is False and doc["fullRankCertificate"] is False


def test_ftsr(capsys):
    code, out, _ = run(capsys, "ftsr", "-i", EXAMPLE)
    doc = json.loads(out)
    assert code == 0
    assert doc["isFTSR"] is False and doc["branch"] == "two-ranks"
    assert doc["ranks"] == {"1": 6, "2": 12}


def test_dual(capsys):
    code, out, _ = run(capsys, "dual", "-i", EXAMPLE)
    doc = json.loads(out)
    assert code == 0
    assert doc["degrees"] == [0, 2, 2]
    assert doc["residual"] < 1e-12


def test_dual_needs_minimal(capsys):
    code, _, err = run(capsys, "dual", "-i", LAMBDA_LAMBDA)
    assert code == 4
    assert "hypothesis" in err


def test_radius_text_shows_na(capsys):
    code, out, _ = run(capsys, "radius", "-i", EXAMPLE, "--format", "text")
    assert code == 0
    assert "ftsrRadius: n/a" in out
    assert "minimalBasisK: 2" in out


def test_radius_json_uses_null(capsys):
    code, out, _ = run(capsys, "radius", "-i", ONE_LAMBDA, "--grid", "1:8")
    doc = json.loads(out)
    assert code == 0
    assert doc["ftsrRadius"] == 1.0 and doc["sharpRadius"] == 1.0
    assert doc["classicalLowerBound"] is not None


def test_radius_bad_grid(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["radius", "-i", EXAMPLE, "--grid", "0.5,x:3"])
    assert exc.value.code == 2


def test_parse_grid():
    assert len(parse_grid("0.5,1,2:64")) == 193
    assert len(parse_grid("1")) == 65
    assert parse_grid("2:4")[0] == 0


def test_perturb(capsys, ftsr_file, tmp_path):
    csv_path = tmp_path / "trials.csv"
    code, out, _ = run(capsys, "perturb", "-i", ftsr_file, "--trials", "5", "--seed", "2",
                       "--fractions", "0.5,0.9", "--csv", str(csv_path))
    doc = json.loads(out)
    assert code == 0
    assert doc["samples"] == 10 and doc["keptCount"] == 10
    assert len(csv_path.read_text().splitlines()) == 11


def test_perturb_needs_ftsr(capsys):
    code, _, _ = run(capsys, "perturb", "-i", EXAMPLE, "--trials", "2")
    assert code == 4


def test_perturb_violation_exit_code(capsys, ftsr_file, monkeypatch):
    monkeypatch.setattr(experiments, "is_ftsr", lambda M, tol=None: False)
    code, out, _ = run(capsys, "perturb", "-i", ftsr_file, "--trials", "2")
    assert code == 3
    assert json.loads(out)["boundViolations"] == {"ftsr": 6}


def test_genericity(capsys):
    code, out, _ = run(capsys, "genericity", "--profile", "4,3:0,1,1,2", "--trials", "10")
    doc = json.loads(out)
    assert code == 0
    assert doc["indexHistogram"] == {"1 1 2": 10}


def test_genericity_is_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["genericity", "--profile", "2,2:1,3", "--trials", "8", "--seed", "4",
                     "-o", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("argv", [
    ["genericity", "--profile", "4,3:0,1,1,2", "--trials", "0"],
    ["genericity", "--profile", "4,3:0,1,x"],
    ["analyze", "-i", EXAMPLE, "--tol", "-1"],
    ["analyze"],
    ["frobnicate"],
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", "-i", str(tmp_path / "nope.json"))
    assert code == 2
    assert "cannot read" in err


def test_malformed_json(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "analyze", "-i", str(bad))
    assert code == 2
    assert "malformed" in err


def test_invalid_matrix_document(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"m": 1, "n": 1, "degrees": [1], "coefficients": [[1, 2, 3]]}))
    code, _, _ = run(capsys, "analyze", "-i", str(bad))
    assert code == 2


def test_rank_deficient_is_hypothesis_failure(capsys, tmp_path):
    path = tmp_path / "def.json"
    row = [[1.0, 2.0, -1.0], [0.0, 1.0, 3.0], [2.0, 0.0, 1.0]]
    M = make_poly_matrix(DegreeProfile.from_mn(2, 1, (2, 2)), [row, row])
    path.write_text(M.to_json())
    code, _, _ = run(capsys, "analyze", "-i", str(path))
    assert code == 4


def test_stdin(capsys, monkeypatch):
    with open(ONE_LAMBDA, encoding="utf-8") as fh:
        monkeypatch.setattr(sys, "stdin", io.StringIO(fh.read()))
    code, out, _ = run(capsys, "analyze", "-i", "-")
    assert code == 0
    assert json.loads(out)["minimalIndices"] == [1]


def test_dump_sylvester_csv(capsys):
    code, out, _ = run(capsys, "dump-sylvester", "-i", EXAMPLE, "--k", "2", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 12 and all(len(l.split(",")) == 14 for l in lines)


def test_dump_sylvester_full_json(capsys):
    code, out, _ = run(capsys, "dump-sylvester", "-i", ONE_LAMBDA, "--k", "2", "--full")
    doc = json.loads(out)
    assert code == 0
    assert doc["shape"] == [3, 4] and doc["trimmed"] is False
    assert doc["data"][1] == [0.0, 1.0, 1.0, 0.0]


def test_output_file(tmp_path):
    out = tmp_path / "r.json"
    assert main(["analyze", "-i", EXAMPLE, "-o", str(out)]) == 0
    assert json.loads(out.read_text())["dPrime"] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "minbasis", "certify", "-i", EXAMPLE],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["isMinimalBasis"] is True
    ver = subprocess.run([sys.executable, "-m", "minbasis", "--version"],
                         capture_output=True, text=True)
    assert ver.stdout.startswith("minbasis ")
