import numpy as np
import pytest

from acfilter.cli import main
from acfilter.output import read_profile_csv, read_sidecar


def test_ground_state_outputs(tmp_path):
    out = tmp_path / "gs.csv"
    assert main(["ground-state", "--kappa", "0.9", "--modes", "64", "--out", str(out)]) == 0
    xs, us = read_profile_csv(out)
    assert len(xs) == 64
    header = out.read_text().splitlines()[0]
    assert header == "x,u"
    # full double precision round trip preserves exact oddness
    assert np.max(np.abs(us + np.roll(us[::-1], 1))) < 1e-15
    meta = read_sidecar(str(out) + ".meta.txt")
    assert float(meta["n_peak"]) == pytest.approx(0.5009053281108011, rel=1e-12)
    assert float(meta["energy0"]) == pytest.approx(1.5327497828938694, rel=1e-10)


def test_simulate_and_classify(tmp_path):
    out = tmp_path / "sim"
    rc = main(
        [
            "simulate", "--kappa", "0.9", "--tau", "0.01", "--modes", "64",
            "--tmax", "100", "--filter", "odd", "--init", "sin", "--out", str(out),
        ]
    )
    assert rc == 0
    series = (out / "series.csv").read_text().splitlines()
    assert series[0] == "t,energy,residual,max_abs,u_at_zero,pde_residual,parity_defect"
    meta = read_sidecar(out / "meta.txt")
    assert meta["stop_reason"] == "tol_reached"
    assert meta["verdict"].startswith("ground(j=1")
    assert main(["classify", "--kappa", "0.9", "--input", str(out / "final.csv")]) == 0


def test_classify_unclassifiable(tmp_path):
    import csv

    path = tmp_path / "bad.csv"
    xs = np.linspace(-np.pi, np.pi, 64, endpoint=False)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "u"])
        for x, u in zip(xs, 0.5 * np.sign(np.sin(xs))):
            w.writerow([x, u])
    assert main(["classify", "--kappa", "0.9", "--input", str(path)]) == 1


def test_simulate_with_noise_meta(tmp_path):
    out = tmp_path / "noisy"
    rc = main(
        [
            "simulate", "--kappa", "0.9", "--tau", "0.01", "--modes", "64",
            "--tmax", "5", "--tol", "1e-14", "--init", "sin",
            "--perturb", "1e-13", "--perturb-parity", "even", "--seed", "5",
            "--out", str(out),
        ]
    )
    assert rc == 0
    meta = read_sidecar(out / "meta.txt")
    assert meta["perturb_parity"] == "even"
    assert meta["seed"] == "5"


def test_simulate2d(tmp_path):
    out = tmp_path / "sim2d"
    rc = main(
        [
            "simulate2d", "--kappa", "0.2", "--tau", "0.01", "--modes", "16,16",
            "--tmax", "1", "--filter", "sym2d", "--snapshot-times", "0.5",
            "--out", str(out),
        ]
    )
    assert rc == 0
    lines = (out / "final.csv").read_text().splitlines()
    assert lines[0] == "x,y,u"
    assert len(lines) == 1 + 16 * 16
    assert (out / "snapshot_t0.5.png").exists()
    assert (out / "series.csv").read_text().splitlines()[0] == (
        "t,energy,residual,max_abs,defect_x,defect_y"
    )


def test_sweep(tmp_path):
    out = tmp_path / "sweep"
    rc = main(
        [
            "sweep", "--kappas", "0.5,0.8", "--tau", "0.05", "--modes", "64",
            "--tmax", "500", "--filter", "odd", "--out", str(out),
        ]
    )
    assert rc == 0
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[0] == "kappa,max_abs_final,verdict,energy_final,stop_reason,error"
    assert len(lines) == 3


def test_list_experiments(capsys):
    assert main(["list-experiments"]) == 0
    out = capsys.readouterr().out
    for name in (
        "fig_wrong_steady", "fig_filtered_steady", "fig_umax_sweep", "fig_energy_curve",
        "ex1_initials", "ex2_threshold", "ex3_metastable", "ex4_2d",
        "amplification_demo", "scheme_comparison",
    ):
        assert name in out


def test_experiment_subcommand(tmp_path):
    rc = main(["experiment", "amplification_demo", "--out", str(tmp_path)])
    assert rc == 0
    meta = read_sidecar(tmp_path / "amplification_demo" / "meta.txt")
    assert meta["experiment"] == "amplification_demo"
    assert all("PASS" in v for k, v in meta.items() if k.startswith("check["))


def test_kappa_range_parsing():
    from acfilter.cli import _parse_kappas

    assert _parse_kappas("0.1:0.3:0.1") == [0.1, 0.2, 0.3]
    assert _parse_kappas("0.5,0.9") == [0.5, 0.9]
    assert _parse_kappas("0.7") == [0.7]
