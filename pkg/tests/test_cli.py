import csv
import json
import subprocess
import sys

import pytest

from qeskc import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_coeffs_m2_json(capsys):
    code, out, _ = run(capsys, "coeffs", "--m", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["m"] == 2
    assert doc["a"][0] == {"num": {"k": "1", "q^2": "1"}, "den": {"k": "3", "q^2": "1"}}
    assert len(doc["a"]) == 3


def test_coeffs_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "coeffs", "--m", "1")
    rows = list(csv.reader(out.splitlines()))
    assert rows[0] == ["index", "numerator", "denominator"]
    assert len(rows) == 3


def test_format_after_subcommand(capsys):
    code, out, _ = run(capsys, "coeffs", "--m", "1", "--format", "csv")
    assert code == 0 and out.startswith("index,")


def test_output_is_byte_stable(capsys):
    _, a, _ = run(capsys, "potential", "--m", "3", "--kappa", "1", "--L", "1", "--calQ", "0.5")
    _, b, _ = run(capsys, "potential", "--m", "3", "--kappa", "1", "--L", "1", "--calQ", "0.5")
    assert a == b
    doc = json.loads(a)
    assert set(doc["exact"]) == {f"B{i}" for i in range(1, 7)} | {"E0", "E1"}


def test_eigensolve_row(capsys):
    code, out, _ = run(capsys, "eigensolve", "--m", "1", "--kappa", "1", "--L", "1", "--Q", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["rows"][0]["exact"] == 15.9375
    assert doc["rows"][0]["rel_err"] < 1e-3
    assert doc["status"] == "within tolerance"


def test_eigensolve_kc_from_dimension(capsys):
    code, out, _ = run(capsys, "eigensolve", "--m", "0", "--kappa", "1", "--d", "3", "--l", "0", "--Q", "1", "--states", "3")
    assert code == 0
    assert [r["exact"] for r in json.loads(out)["rows"]][:2] == [0.75, 3.9375]


def test_eigensolve_tolerance_exceeded(capsys):
    code, _, err = run(capsys, "eigensolve", "--kappa", "1", "--L", "1", "--Q", "1", "--n", "100", "--tol", "1e-12")
    assert code == 1
    assert json.loads(err)["exit"] == 1


def test_verify_exit_zero(capsys):
    code, out, _ = run(capsys, "verify", "--m-max", "3")
    assert code == 0
    assert json.loads(out)["status"] == "all residuals zero"


def test_conjecture_and_cdsi(capsys):
    code, out, _ = run(capsys, "conjecture", "--m-max", "5")
    assert code == 0
    assert json.loads(out)["reports"]["4"]["passed"] is True
    code, out, _ = run(capsys, "cdsi-check")
    assert code == 0
    assert json.loads(out)["status"] == "routes agree"


@pytest.mark.parametrize(
    "argv",
    [
        ["eigensolve", "--kappa", "1", "--L", "1"],
        ["eigensolve", "--kappa", "-1", "--L", "1", "--Q", "1"],
        ["eigensolve", "--kappa", "1", "--L", "1", "--Q", "1", "--calQ", "1"],
        ["eigensolve", "--kappa", "1", "--L", "1", "--Q", "1", "--m", "2", "--states", "3"],
        ["eigensolve", "--kappa", "1", "--L", "1", "--Q", "1", "--eps", "0.5"],
        ["coeffs", "--m", "0"],
        ["verify", "--m-min", "3", "--m-max", "2"],
        ["nosuch"],
    ],
)
def test_bad_configuration_exits_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert json.loads(err)["exit"] == 2


def test_bad_thread_setting(capsys, monkeypatch):
    monkeypatch.setenv("QESKC_THREADS", "zero")
    code, _, _ = run(capsys, "verify", "--m-max", "2")
    assert code == 2


def test_plotdata_files(tmp_path, capsys):
    code, _, _ = run(capsys, "plotdata", "--out", str(tmp_path))
    assert code == 0
    with open(tmp_path / "potential.csv") as fh:
        pot = list(csv.DictReader(fh))
    with open(tmp_path / "wavefunctions.csv") as fh:
        wav = list(csv.DictReader(fh))
    assert len(pot) == len(wav) == 1000
    assert set(pot[0]) == {"r", "V_extended", "V_KC"}
    psi1 = [float(row["psi1"]) for row in wav]
    r = [float(row["r"]) for row in wav]
    flips = [i for i in range(len(psi1) - 1) if psi1[i] * psi1[i + 1] < 0]
    assert len(flips) == 1
    assert abs(r[flips[0]] - 0.692) < 2e-3
    assert all(float(row["psi0"]) > 0 for row in wav)


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "qeskc.cli", "coeffs", "--m", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["m"] == 1
