import csv
import math

import numpy as np
import pytest

from betadec import cli
from betadec.density import EnsembleSpec, Weight
from betadec.sampler import ChainConfig, sample_me


def run(*argv):
    return cli.run(list(argv))


def test_usage_errors():
    assert run("frobnicate") == 2
    assert run("verify") == 2
    assert run("verify", "decimation") == 2  # --relation required
    assert run("verify", "decimation", "--relation", "cubic") == 2


def test_ci_requires_seed():
    assert run("--ci", "verify", "gap", "--M", "500", "--burn-in", "50") == 2
    assert run("verify", "lemma", "--r-max", "3") == 0  # non-randomized: fine without


def test_verify_lemma_and_asymptotic():
    assert run("verify", "lemma", "--r-max", "5") == 0
    assert run("verify", "asymptotic") == 0


def test_verify_selberg_morris_quick():
    assert run("verify", "selberg", "--points", "32") == 0
    assert run("verify", "morris", "--points", "64") == 0


def test_verify_theorem1_quick():
    assert run("verify", "theorem1", "--points", "24", "--seed", "5") == 0
    assert run("verify", "theorem1", "--circular", "--points", "32", "--seed", "5") == 0


def test_write_samples_csv_roundtrip(tmp_path):
    spec = EnsembleSpec(2.0, 3, Weight.gaussian(1.0))
    batch = sample_me(spec, ChainConfig(burn_in_sweeps=100, chains=20), 44)
    path = tmp_path / "batch.csv"
    cli.write_samples_csv(batch, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x1,x2,x3"
    assert len(lines) == 21
    back = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    assert np.array_equal(back, batch.values)  # bitwise round-trip
    meta = (tmp_path / "batch.csv.meta").read_text()
    assert "master_seed=44" in meta


def test_write_report_csv_schema(tmp_path):
    from betadec.stats import KSResult, VerificationReport

    rep = VerificationReport(
        relation_id="demo", r=1, N=2,
        positions=[KSResult(0.1, 0.5, 100, 100), KSResult(0.2, 0.01, 100, 100)],
        threshold=1e-3, passed=True, runtime_s=0.0, seeds={}, M=100,
    )
    path = tmp_path / "rep.csv"
    cli.write_report_csv(rep, path)
    rows = list(csv.reader(path.read_text().splitlines()))
    assert rows[0] == ["relation", "r", "N", "position", "ks_D", "p_value", "n1", "n2", "pass"]
    assert len(rows) == 4  # 2 positions + summary
    assert rows[-1][3] == "all" and rows[-1][8] == "true"
    assert rows[1][8] == "true" and rows[2][8] == "true"


def test_cli_decimation_deterministic(tmp_path):
    args = ["verify", "decimation", "--relation", "gaussian", "--r", "1", "--N", "2",
            "--M", "1500", "--burn-in", "300", "--seed", "77"]
    d1, d2 = tmp_path / "a", tmp_path / "b"
    assert run(*args, "--out-dir", str(d1)) == 0
    assert run(*args, "--out-dir", str(d2)) == 0
    for name in ("decimation_gaussian_r1_N2_report.csv",
                 "decimation_gaussian_r1_N2_lhs.csv",
                 "decimation_gaussian_r1_N2_rhs.csv"):
        assert (d1 / name).read_bytes() == (d2 / name).read_bytes()


def test_cli_negative_control_passes_as_rejection(tmp_path):
    code = run("verify", "decimation", "--relation", "gaussian", "--r", "1", "--N", "2",
               "--M", "4000", "--burn-in", "400", "--seed", "78",
               "--negative-control", "stride")
    assert code == 0  # the control is expected to reject; that counts as pass


def test_cli_sample_and_gap(tmp_path):
    out = tmp_path / "s.csv"
    assert run("sample", "--ensemble", "jacobi", "--beta", "1", "--N", "2", "--a", "1.0",
               "--M", "200", "--burn-in", "100", "--seed", "3", "--out", str(out)) == 0
    assert out.exists() and out.with_suffix(".csv.meta").exists()
    assert run("verify", "gap", "--a", "0", "--b", "0", "--interior", "0.5",
               "--M", "20000", "--burn-in", "400", "--seed", "9") == 0


def test_config_file_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nr-max = 3\n")
    assert run("--config", str(cfg), "verify", "lemma") == 0
    # flag wins over config
    assert run("--config", str(cfg), "verify", "lemma", "--r-max", "4") == 0
    bad = tmp_path / "bad.cfg"
    bad.write_text("not a kv line\n")
    assert run("--config", str(bad), "verify", "lemma") == 2


def test_failure_exit_code():
    # an impossible tolerance forces a verification failure -> exit 1
    assert run("verify", "selberg", "--points", "16", "--tol", "1e-30") == 1


def test_threads_flag():
    assert run("--threads", "1", "verify", "lemma", "--r-max", "3") == 0
