import json
import math
import subprocess
import sys

import pytest

from qespi.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, emit_report, main


def run_cli(tmp_path, args, name="r.json"):
    out = tmp_path / name
    code = main(list(args) + ["--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_sextic_compare_numeric(tmp_path):
    code, rep = run_cli(tmp_path, ["qes-sextic", "--n", "1", "--q", "0", "--a", "1", "--b", "0", "--compare-numeric"])
    assert code == EXIT_OK
    vals = sorted(e["re"] for e in rep["eigenvalues"])
    assert all(abs(v - s * 2 * math.sqrt(2)) < 1e-12 for v, s in zip(vals, (-1, 1)))
    assert rep["numeric"]["comparison"]["max_rel_error"] <= 1e-6


def test_gl2_verify(tmp_path):
    code, rep = run_cli(tmp_path, ["gl2-verify", "--n", "4", "--seed", "7"])
    assert code == EXIT_OK and rep["exact_zero"] and rep["seed"] == 7
    assert all(r["annihilation_exact_zero"] for r in rep["per_n"])


def test_classical_origin(tmp_path):
    csv_path = tmp_path / "traj.csv"
    code, rep = run_cli(
        tmp_path,
        ["classical", "--n", "0", "--q", "1", "--a", "1", "--b", "0", "--x0", "0", "--p0", "0", "--T", "2", "--csv", str(csv_path)],
    )
    assert code == EXIT_OK
    assert rep["I_origin"] == ["-1/2", "0/1"]
    assert rep["trajectory"]["I_start"] == {"re": -0.5, "im": 0.0} == rep["trajectory"]["I_end"]
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "time,x,p,H,ReI,ImI"
    assert all(row.split(",")[1] == "0.0" for row in lines[1:])


def test_cs_verify(tmp_path):
    code, rep = run_cli(tmp_path, ["cs-verify", "--rank", "2", "--nu", "3/2", "--omega", "2"])
    assert code == EXIT_OK and rep["f"] == [1, 1] and rep["E0"]["re"] == "11/1"
    code, rep = run_cli(tmp_path, ["cs-verify", "--trig", "--beta", "2", "--mu", "3"], "t.json")
    assert code == EXIT_OK and rep["E0"]["re"] == "9/1"


def test_qes_heun_spectrum_csv(tmp_path):
    csv_path = tmp_path / "energies.csv"
    code, rep = run_cli(tmp_path, ["qes-heun", "--n", "2", "--coeff", "c_0m=-4", "--coeff", "c_0=1", "--csv", str(csv_path)])
    assert code == EXIT_OK and rep["coefficient_source"] == "given"
    assert csv_path.read_text().splitlines()[0] == "index,re,im"


def test_sextic_spectra_csv(tmp_path):
    csv_path = tmp_path / "s.csv"
    pot = tmp_path / "v.csv"
    code, _ = run_cli(tmp_path, ["qes-sextic", "--n", "2", "--q", "1", "--a", "1", "--b", "1", "--csv", str(csv_path), "--potential-csv", str(pot)])
    assert code == EXIT_OK
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "index,energy,sector" and all(l.endswith(",odd") for l in lines[1:])
    assert pot.read_text().splitlines()[0] == "x,V"


@pytest.mark.parametrize(
    "args",
    [
        ["qes-sextic", "--n", "1", "--q", "2", "--a", "1", "--b", "0"],
        ["qes-sextic", "--n", "1", "--q", "0", "--a", "0", "--b", "0"],
        ["gl2-verify", "--n", "2"],
        ["qes-heun", "--n", "2", "--coeff", "bogus=1"],
        ["cs-verify", "--rank", "3"],
        ["classical", "--n", "1", "--q", "0", "--a", "1", "--b", "0", "--dt", "-1"],
        ["nonsense"],
    ],
)
def test_usage_errors(tmp_path, args):
    code, _ = run_cli(tmp_path, args)
    assert code == EXIT_USAGE


def test_algebraicity_error_maps_to_failure(tmp_path, monkeypatch):
    import qespi.weylcs as w
    from qespi.weylcs import AlgebraicityError

    def broken(*args, **kwargs):
        raise AlgebraicityError("forced")

    monkeypatch.setattr(w, "build_rational_model", broken)
    code, _ = run_cli(tmp_path, ["cs-verify", "--rank", "1"])
    assert code == EXIT_FAIL


def test_numeric_mismatch_is_failure(tmp_path):
    code, rep = run_cli(
        tmp_path, ["qes-sextic", "--n", "1", "--q", "0", "--a", "1", "--b", "0", "--compare-numeric", "--grid", "64", "--rel-tol", "1e-12"]
    )
    assert code == EXIT_FAIL and rep["exact_zero"] is False


def test_empty_report(tmp_path):
    out = tmp_path / "e.json"
    emit_report(None, str(out))
    assert json.loads(out.read_text()) == {}


@pytest.mark.parametrize(
    "args",
    [
        ["gl2-verify", "--n", "3", "--seed", "11"],
        ["qes-heun", "--n", "3", "--seed", "5"],
        ["qes-sextic", "--n", "2", "--q", "1", "--a", "1/2", "--b", "3", "--compare-numeric"],
        ["classical", "--n", "1", "--q", "0", "--a", "1", "--b", "0", "--x0", "0.3", "--T", "1"],
        ["cs-verify", "--rank", "2", "--nu", "2", "--omega", "1"],
        ["cs-verify", "--trig", "--beta", "1", "--mu", "1/2"],
    ],
)
def test_byte_identical_runs(tmp_path, args):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    ca, cb = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a), "--csv", str(ca)]) == main(args + ["--out", str(b), "--csv", str(cb)])
    assert a.read_bytes() == b.read_bytes()
    if ca.exists():
        assert ca.read_bytes() == cb.read_bytes()


def test_entry_point_subprocess(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "qespi.cli", "qes-sextic", "--n", "0", "--q", "0", "--a", "1", "--b", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["exact_zero"] is True
