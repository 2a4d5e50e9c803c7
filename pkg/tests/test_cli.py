import json

import numpy as np
import pytest

from kpzlab.cli import main, read_table
from kpzlab.battery import BatteryConfig, verification_matrix


def run(*args):
    return main([str(a) for a in args])


def test_sample_matrix_tridiagonal_reproducible(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sample-matrix", "--ensemble", "tridiagonal", "--beta", 2, "--n", 100000, "--alpha", 1, "--reps", 100, "--seed", 7]
    assert run(*args, "--out", a) == 0
    assert run(*args, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()
    cfg, header, cols = read_table(a)
    assert header == ["replica", "value", "overflow"]
    assert cols["value"].size == 100 and cfg["n"] == 100000


def test_zero_reps_header_only(tmp_path):
    out = tmp_path / "z.csv"
    assert run("sample-matrix", "--n", 50, "--reps", 0, "--out", out) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 2 and lines[1] == "replica,value,overflow"


def test_dense_beta3_rejected(capsys):
    assert run("sample-matrix", "--ensemble", "gaussian", "--beta", 3, "--n", 10) == 2
    assert "beta" in capsys.readouterr().err


def test_tridiagonal_accepts_general_beta(tmp_path):
    assert run("sample-matrix", "--ensemble", "tridiagonal", "--beta", 3, "--n", 500, "--reps", 2, "--out", tmp_path / "t.csv") == 0


def test_worker_count_does_not_change_output(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    common = ["sample-airy", "--reps", 6, "--seed", 4, "--n-sim", 1000]
    assert run(*common, "--workers", 1, "--out", a) == 0
    assert run(*common, "--workers", 2, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sample_airy_has_positive_bound(tmp_path):
    out = tmp_path / "airy.csv"
    assert run("sample-airy", "--reps", 5, "--seed", 1, "--out", out) == 0
    _, header, cols = read_table(out)
    assert "truncation_bound" in header
    assert np.all(cols["truncation_bound"] > 0)


def test_sample_excursion_seeds(tmp_path):
    a, b, c = (tmp_path / f"{t}.csv" for t in "abc")
    base = ["sample-excursion", "--reps", 3, "--inner-m", 50, "--seed", 1]
    assert run(*base, "--noise-seed", 9, "--out", a) == 0
    assert run(*base, "--noise-seed", 9, "--out", b) == 0
    assert run(*base, "--noise-seed", 10, "--out", c) == 0
    assert a.read_bytes() == b.read_bytes()
    assert read_table(a)[2]["value"][0] != read_table(c)[2]["value"][0]


def test_eval_laplace(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("eval-laplace", "--u-grid", "0,0.5,2", "--order", 80, "--out", a) == 0
    assert run("eval-laplace", "--u-grid", "0,0.5,2", "--order", 160, "--out", b) == 0
    va, vb = read_table(a)[2]["value"], read_table(b)[2]["value"]
    assert va[0] == 1.0
    assert np.max(np.abs(va - vb)) < 1e-8


def test_eval_laplace_beta1_has_se(tmp_path):
    out = tmp_path / "l1.csv"
    assert run("eval-laplace", "--beta", 1, "--u-grid", "0,1", "--reps", 10, "--n-sim", 500, "--out", out) == 0
    assert "se" in read_table(out)[1]


def test_tw2_monotone(tmp_path):
    out = tmp_path / "tw.csv"
    assert run("tw2", "--points", 25, "--out", out) == 0
    f = read_table(out)[2]["F2"]
    assert np.all(np.diff(f) > 0) and f[0] < 1e-10 and f[-1] > 0.999


def test_compare_self_and_mismatch(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run("sample-airy", "--reps", 20, "--seed", 1, "--out", a)
    run("sample-airy", "--reps", 20, "--seed", 1, "--alpha", 2, "--out", b)
    rep = tmp_path / "r.json"
    assert run("compare", a, a, "--u-grid", "0.5,1", "--n-bootstrap", 50, "--out", rep, "--dat", tmp_path / "cdf") == 0
    doc = json.loads(rep.read_text())
    assert doc["passed"] and all(r["passed"] for r in doc["reports"])
    assert (tmp_path / "cdf_a.dat").exists()
    assert run("compare", a, b) == 2
    assert "alpha" in capsys.readouterr().err


def test_compare_failure_exit_code(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run("sample-matrix", "--n", 300, "--reps", 200, "--alpha", 1, "--beta", 2, "--out", a)
    run("sample-airy", "--reps", 200, "--alpha", 1, "--beta", 2, "--quantity", "largest", "--out", b)
    assert run("compare", a, b) == 3


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("reps = 4\nseed = 3\nn-sim = 800\n")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("sample-airy", "--config", cfg, "--out", a) == 0
    assert run("sample-airy", "--config", cfg, "--seed", 5, "--out", b) == 0
    ca, _, cols = read_table(a)
    cb, _, _ = read_table(b)
    assert cols["value"].size == 4 and ca["n_sim"] == 800
    assert ca["seed"] == 3 and cb["seed"] == 5


def test_bad_config_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nonsense = 1\n")
    assert run("sample-airy", "--config", cfg) == 2


def test_runtime_error_exit_code(tmp_path):
    assert run("sample-airy", "--k", 50, "--n-sim", 10, "--reps", 1, "--out", tmp_path / "x.csv") == 1


def test_empty_battery():
    assert verification_matrix(BatteryConfig(tests=())) == []


def test_unknown_battery_test():
    with pytest.raises(ValueError):
        verification_matrix(BatteryConfig(tests=("nope",)))
