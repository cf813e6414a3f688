import csv
import os
import subprocess
import sys

import numpy as np
import pytest

from sibucket.cli import (
    EXIT_CONFIG,
    EXIT_IO,
    EXIT_NUMERIC,
    load_pattern_dir,
    main,
)
from sibucket.grid import read_field


def _read_scalars(path):
    out = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out[row["name"]] = float(row["value"])
    return out


def test_generate_and_roundtrip(tmp_path):
    out = tmp_path / "masks"
    assert main([
        "generate", "--family", "pixel", "--L", "3", "--nbar", "100",
        "--out", str(out),
    ]) == 0
    p = load_pattern_dir(str(out))
    assert p.M == 9
    assert p.family == "pixel"
    assert p.n_bar == 100.0
    np.testing.assert_array_equal(p.mask_matrix.sum(axis=0), 1.0)


def test_generate_bad_family_parameters(tmp_path):
    # even M for the two-pixel family is a configuration error
    rc = main([
        "generate", "--family", "two-pixel", "--L", "2",
        "--out", str(tmp_path / "m"),
    ])
    assert rc == EXIT_CONFIG


def test_generate_pseudo_random_infeasible(tmp_path):
    rc = main([
        "generate", "--family", "pseudo-random", "--L", "4",
        "--t1", "0.9", "--kappa", "2", "--out", str(tmp_path / "m"),
    ])
    assert rc == EXIT_CONFIG


def test_basis_outputs(tmp_path, capsys):
    masks = tmp_path / "masks"
    basis_dir = tmp_path / "basis"
    main(["generate", "--family", "harmonic", "--L", "3", "--out", str(masks)])
    assert main(["basis", "--patterns", str(masks), "--out", str(basis_dir)]) == 0
    q = np.loadtxt(basis_dir / "Q.csv", delimiter=",")
    q2 = np.loadtxt(basis_dir / "Q2.csv", delimiter=",")
    np.testing.assert_allclose(q @ q, q2, rtol=1e-9, atol=1e-12)
    v0 = read_field(basis_dir / "V_000.sif")
    assert (v0.values**2).mean() == pytest.approx(1.0, rel=1e-9)
    conditions = (basis_dir / "conditions.txt").read_text()
    assert "condition1_holds = True" in conditions
    assert "condition2_holds = True" in conditions


def test_basis_missing_pattern_dir(tmp_path):
    rc = main(["basis", "--patterns", str(tmp_path / "nope"), "--out",
               str(tmp_path / "b")])
    assert rc == EXIT_IO


def test_basis_singular_set_is_numeric_error(tmp_path):
    masks = tmp_path / "masks"
    main(["generate", "--family", "pixel", "--L", "2", "--out", str(masks)])
    # duplicate one mask to make the set singular
    data = (masks / "mask_000.sif").read_bytes()
    (masks / "mask_001.sif").write_bytes(data)
    rc = main(["basis", "--patterns", str(masks), "--out", str(tmp_path / "b")])
    assert rc == EXIT_NUMERIC


def test_measure_and_reconstruct(tmp_path):
    masks = tmp_path / "masks"
    basis_dir = tmp_path / "basis"
    meas = tmp_path / "meas.csv"
    rec_dir = tmp_path / "recon"
    # the basis weights scale with n_bar, so generate with the same
    # photometry the measurement will use
    main(["generate", "--family", "pixel", "--L", "3", "--nbar", "50000",
          "--out", str(masks)])
    main(["basis", "--patterns", str(masks), "--out", str(basis_dir)])
    assert main([
        "measure", "--patterns", str(masks), "--object", "builtin:flat",
        "--trials", "4", "--seed", "9", "--out", str(meas),
    ]) == 0
    with open(meas, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4 * 9
    assert float(rows[0]["a_bar_m"]) == pytest.approx(50000 / 9.0, rel=1e-12)
    assert main([
        "reconstruct", "--measurements", str(meas),
        "--basis", str(basis_dir), "--out", str(rec_dir),
    ]) == 0
    mean = read_field(rec_dir / "recon_mean.sif")
    # 4 trials at 50000/9 mean counts: reconstruction is 1 within a few %
    np.testing.assert_allclose(mean.values, 1.0, rtol=0.05)
    assert (rec_dir / "recon_trial_0003.sif").exists()


def test_measure_determinism(tmp_path):
    masks = tmp_path / "masks"
    main(["generate", "--family", "pixel", "--L", "2", "--out", str(masks)])
    args = ["measure", "--patterns", str(masks), "--object", "builtin:flat",
            "--nbar", "100", "--trials", "3", "--seed", "5"]
    main(args + ["--out", str(tmp_path / "a.csv")])
    main(args + ["--out", str(tmp_path / "b.csv")])
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_measure_bad_object(tmp_path):
    masks = tmp_path / "masks"
    main(["generate", "--family", "pixel", "--L", "2", "--out", str(masks)])
    rc = main(["measure", "--patterns", str(masks), "--object", "builtin:nope",
               "--out", str(tmp_path / "m.csv")])
    assert rc == EXIT_CONFIG


def test_metrics_scalars(tmp_path):
    masks = tmp_path / "masks"
    out = tmp_path / "metrics"
    main(["generate", "--family", "pixel", "--L", "5", "--nbar", "10000",
          "--out", str(masks)])
    assert main([
        "metrics", "--patterns", str(masks), "--object", "builtin:flat",
        "--out", str(out),
    ]) == 0
    scalars = _read_scalars(out / "scalars.csv")
    assert scalars["snr_flat_sq"] == pytest.approx(400.0, rel=1e-9)
    assert scalars["iqc_flat_sq"] == pytest.approx(0.04, rel=1e-9)
    assert scalars["iqc_dose_sq"] == pytest.approx(1.0, rel=1e-9)
    assert scalars["resolution_uniform"] == pytest.approx(1.0, rel=1e-9)
    res_map = read_field(out / "resolution_map.sif")
    np.testing.assert_allclose(res_map.values, 1.0, atol=1e-12)


def test_metrics_with_mc(tmp_path):
    masks = tmp_path / "masks"
    out = tmp_path / "metrics"
    main(["generate", "--family", "pixel", "--L", "3", "--nbar", "9000",
          "--out", str(masks)])
    main(["metrics", "--patterns", str(masks), "--object", "builtin:flat",
          "--trials", "400", "--seed", "21", "--out", str(out)])
    scalars = _read_scalars(out / "scalars.csv")
    assert scalars["mc_trials"] == 400
    expect = scalars["snr_flat_sq"]
    assert abs(scalars["snr_flat_sq_mc"] - expect) \
        < 5 * scalars["snr_flat_sq_mc_stderr"]
    assert (out / "snr_map_mc.sif").exists()


def test_classify_matrix(tmp_path, capsys):
    mat = tmp_path / "m.csv"
    mat.write_text("1,1\n-1,1\n")
    assert main(["classify", "--matrix", str(mat)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("class I:")
    assert "heuristic" in out


def test_classify_patterns(tmp_path, capsys):
    masks = tmp_path / "masks"
    main(["generate", "--family", "two-pixel", "--L", "3", "--out", str(masks)])
    capsys.readouterr()
    assert main(["classify", "--patterns", str(masks)]) == 0
    assert capsys.readouterr().out.startswith("class III:")


@pytest.mark.parametrize(
    "scenario", ["pixel", "two-pixel", "harmonic", "pseudo-random", "classes"]
)
def test_reproduce_scenarios(tmp_path, capsys, scenario):
    assert main(["reproduce", "--scenario", scenario, "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert "PASS" in out
    table = tmp_path / f"reproduce_{scenario}.csv"
    with open(table, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert rows and all(r["pass"] == "True" for r in rows)


def test_pipeline_end_to_end(tmp_path):
    out = tmp_path / "run"
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "family = pixel\nL = 3\nnbar = 2000\ntrials = 5\nseed = 11\n"
        f"out = {out}\n"
    )
    assert main(["pipeline", "--config", str(cfg)]) == 0
    for rel in (
        "patterns/manifest.txt",
        "basis/Q.csv",
        "recon_noiseless.sif",
        "measurements.csv",
        "recon/recon_mean.sif",
        "metrics/scalars.csv",
        "run_manifest.txt",
    ):
        assert (out / rel).exists(), rel
    manifest = (out / "run_manifest.txt").read_text()
    assert "config.family = pixel" in manifest
    assert "sha256.measurements.csv" in manifest
    # noiseless projection of the flat object is exactly flat
    noiseless = read_field(out / "recon_noiseless.sif")
    np.testing.assert_allclose(noiseless.values, 1.0, atol=1e-9)


def test_pipeline_reruns_identically(tmp_path):
    hashes = []
    for name in ("run_a", "run_b"):
        out = tmp_path / name
        cfg = tmp_path / f"{name}.cfg"
        cfg.write_text(f"family = harmonic\nL = 3\ntrials = 3\nout = {out}\n")
        assert main(["pipeline", "--config", str(cfg)]) == 0
        lines = (out / "run_manifest.txt").read_text().splitlines()
        hashes.append(sorted(
            line.split("= ")[1] for line in lines if line.startswith("sha256.")
        ))
    assert hashes[0] == hashes[1]


def test_pipeline_missing_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("family = pixel\n")
    assert main(["pipeline", "--config", str(cfg)]) == EXIT_CONFIG


def test_pipeline_missing_config_file(tmp_path):
    assert main(["pipeline", "--config", str(tmp_path / "none.cfg")]) == EXIT_IO


def test_entry_point_version():
    proc = subprocess.run(
        [sys.executable, "-m", "sibucket.cli", "--version"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "0.1.0"


def test_force_python_backend_subprocess():
    code = (
        "import sibucket.rng as r; print(r.BACKEND)"
    )
    env = dict(os.environ, SIBUCKET_FORCE_PYTHON="1")
    proc = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env
    )
    assert proc.stdout.strip() == "python"
