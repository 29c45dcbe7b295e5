import pytest

from acfilter.experiments import EXPERIMENTS, experiment, list_experiments

DOCUMENTED = {
    "fig_wrong_steady",
    "fig_filtered_steady",
    "fig_umax_sweep",
    "fig_energy_curve",
    "ex1_initials",
    "ex2_threshold",
    "ex3_metastable",
    "ex4_2d",
    "amplification_demo",
    "scheme_comparison",
}


def test_registry_names():
    assert set(EXPERIMENTS) == DOCUMENTED
    assert {name for name, _ in list_experiments()} == DOCUMENTED


def test_unknown_name_raises(tmp_path):
    with pytest.raises(ValueError):
        experiment("spectral_disco", out_root=tmp_path)


def test_energy_curve_experiment(tmp_path):
    rc = experiment("fig_energy_curve", out_root=tmp_path, fast=True)
    assert rc == 0
    out = tmp_path / "fig_energy_curve"
    assert (out / "energy_curve.csv").exists()
    assert (out / "profiles.svg").exists()
    assert (out / "meta.txt").exists()
    header = (out / "energy_curve.csv").read_text().splitlines()[0]
    assert header == "kappa,energy0,n_peak"


def test_wrong_steady_experiment(tmp_path):
    rc = experiment("fig_wrong_steady", out_root=tmp_path, fast=True, seed=0)
    assert rc == 0
    out = tmp_path / "fig_wrong_steady"
    for name in ("series.csv", "final.csv", "steady_state.svg", "u_at_zero.svg", "meta.txt"):
        assert (out / name).exists()


def test_experiment_outputs_are_reproducible(tmp_path):
    for tag in ("a", "b"):
        assert experiment("fig_wrong_steady", out_root=tmp_path / tag, fast=True, seed=3) == 0
    for name in ("series.csv", "final.csv"):
        a = (tmp_path / "a" / "fig_wrong_steady" / name).read_bytes()
        b = (tmp_path / "b" / "fig_wrong_steady" / name).read_bytes()
        assert a == b


def test_ex1_initials_experiment(tmp_path):
    rc = experiment("ex1_initials", out_root=tmp_path, fast=True, seed=0)
    assert rc == 0
    out = tmp_path / "ex1_initials"
    assert (out / "steady_states.svg").exists()
    assert (out / "final_mix_1_8.csv").exists()


def test_scheme_comparison_experiment(tmp_path):
    rc = experiment("scheme_comparison", out_root=tmp_path, fast=True, seed=0)
    assert rc == 0
    out = tmp_path / "scheme_comparison"
    for scheme in ("imex1", "implicit_euler", "bdf2x", "strang"):
        assert (out / f"series_{scheme}.csv").exists()
    assert (out / "parity_defect_growth.svg").exists()
