"""Command-line front end: acfilter <subcommand>."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__, ac2d
from .dynamics import PerturbationConfig, RunConfig, run, sweep_kappa
from .experiments import EXPERIMENTS, experiment, initial_field, list_experiments
from .filters import FilterSpec
from .ground_state import (
    ClassificationError,
    classify_steady,
    ground_energy_forms,
    profile,
    solve_n_peak,
)
from .output import (
    read_profile_csv,
    write_grid_csv,
    write_profile_csv,
    write_series2d_csv,
    write_series_csv,
    write_sidecar,
    write_sweep_csv,
)
from .plots import heatmap
from .schemes import CLI_SCHEME_NAMES, SchemeConfig
from .spectral import PeriodicGrid1D, SpectralField1D


def _common(parser):
    parser.add_argument("--out", type=Path, default=Path("artifacts"), help="output directory")
    parser.add_argument("--fast", action="store_true", help="reduced resolution/horizon")
    parser.add_argument("--seed", type=int, default=0, help="noise seed")


def _perturbation(args) -> PerturbationConfig | None:
    if args.perturb is None:
        return None
    return PerturbationConfig(
        eps_star=args.perturb, parity=args.perturb_parity, seed=args.seed
    )


def _add_run_flags(p):
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--tau", type=float, default=0.01)
    p.add_argument("--tmax", type=float, default=1e5)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--record-every", type=int, default=100)
    p.add_argument("--perturb", type=float, default=None, metavar="EPS_STAR")
    p.add_argument("--perturb-parity", choices=["odd", "even", "unconstrained"], default="even")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="acfilter", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ground-state", help="emit the ground-state profile and metadata")
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--modes", type=int, default=256)
    p.add_argument("--out", type=Path, required=True, help="CSV output file")
    _common_lite(p)

    p = sub.add_parser("simulate", help="run the 1D dynamics")
    _add_run_flags(p)
    p.add_argument("--modes", type=int, default=256)
    p.add_argument("--scheme", choices=sorted(CLI_SCHEME_NAMES), default="imex1")
    p.add_argument("--filter", default="none", help="none | odd | gap:L")
    p.add_argument("--init", default="sin", help="sin | sin:L | mix:a,b,...")
    p.add_argument("--theorem-mode", action="store_true")
    _common(p)

    p = sub.add_parser("simulate2d", help="run the 2D dynamics")
    _add_run_flags(p)
    p.add_argument("--modes", default="256,256", help="NX,NY")
    p.add_argument("--filter", default="none", help="none | sym2d")
    p.add_argument("--init", default="sinxy", help="sinxy (sin(x)sin(y))")
    p.add_argument("--snapshot-times", default="", help="comma-separated times for field snapshots")
    _common(p)

    p = sub.add_parser("sweep", help="run a kappa sweep")
    p.add_argument("--kappas", default="0.1:0.95:0.05", help="lo:hi:step or comma list")
    p.add_argument("--tau", type=float, default=0.01)
    p.add_argument("--modes", type=int, default=256)
    p.add_argument("--tmax", type=float, default=3000.0)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--filter", default="none")
    p.add_argument("--init", default="sin")
    p.add_argument("--perturb", type=float, default=None, metavar="EPS_STAR")
    p.add_argument("--perturb-parity", choices=["odd", "even", "unconstrained"], default="even")
    p.add_argument("--record-every", type=int, default=1000)
    _common(p)

    p = sub.add_parser("classify", help="classify a near-steady profile CSV")
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--input", type=Path, required=True, help="CSV with header x,u")
    _common_lite(p)

    p = sub.add_parser("experiment", help="run a named experiment")
    p.add_argument("name", choices=sorted(EXPERIMENTS))
    _common(p)

    sub.add_parser("list-experiments", help="list the experiment registry")

    args = parser.parse_args(argv)
    return _dispatch(args)


def _common_lite(parser):
    parser.add_argument("--fast", action="store_true", help=argparse.SUPPRESS)
    parser.add_argument("--seed", type=int, default=0, help=argparse.SUPPRESS)


def _parse_kappas(text: str) -> list[float]:
    if "," in text:
        return [float(s) for s in text.split(",") if s]
    if ":" in text:
        lo, hi, step = (float(s) for s in text.split(":"))
        n = int(round((hi - lo) / step)) + 1
        return [round(lo + i * step, 10) for i in range(n)]
    return [float(text)]


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "ground-state":
        gs = profile(args.kappa, PeriodicGrid1D(args.modes))
        xs = PeriodicGrid1D(args.modes).nodes
        write_profile_csv(args.out, xs, gs.profile)
        e23, e29 = ground_energy_forms(args.kappa)
        write_sidecar(
            Path(str(args.out) + ".meta.txt"),
            {
                "kappa": args.kappa,
                "n_peak": gs.n_peak,
                "peak_deficit_eps": gs.eps,
                "energy0": e23,
                "energy0_first_integral_form": e29,
                "modes": args.modes,
            },
        )
        print(f"ground state kappa={args.kappa}: n_peak={gs.n_peak!r} energy0={e23!r}")
        return 0

    if cmd == "simulate":
        grid = PeriodicGrid1D(args.modes)
        u0 = initial_field(grid, args.init)
        cfg = RunConfig(
            SchemeConfig(CLI_SCHEME_NAMES[args.scheme], args.tau, args.kappa),
            FilterSpec.parse(args.filter),
            t_max=args.tmax,
            tol=args.tol,
            record_every=args.record_every,
            perturbation=_perturbation(args),
            theorem_mode=args.theorem_mode,
        )
        rec = run(u0, cfg)
        out = args.out
        out.mkdir(parents=True, exist_ok=True)
        write_series_csv(out / "series.csv", rec)
        write_profile_csv(out / "final.csv", grid.nodes, rec.final_state.values)
        try:
            verdict = classify_steady(rec.final_state, args.kappa).describe()
        except ClassificationError as exc:
            verdict = f"unclassified({exc})"
        write_sidecar(
            out / "meta.txt",
            {
                "scheme": CLI_SCHEME_NAMES[args.scheme],
                "kappa": args.kappa,
                "tau": args.tau,
                "modes": args.modes,
                "filter": args.filter,
                "init": args.init,
                "tol": args.tol,
                "t_max": args.tmax,
                "perturb_eps_star": args.perturb if args.perturb is not None else "none",
                "perturb_parity": args.perturb_parity if args.perturb is not None else "none",
                "seed": args.seed,
                "stop_reason": rec.stop_reason,
                "t_final": rec.times[-1],
                "max_abs_final": rec.max_abs[-1],
                "energy_final": rec.energies[-1],
                "verdict": verdict,
            },
        )
        print(f"simulate: stop={rec.stop_reason} t={rec.times[-1]:g} verdict={verdict}")
        return 0

    if cmd == "simulate2d":
        nx, ny = (int(s) for s in args.modes.split(","))
        if args.init != "sinxy":
            raise SystemExit(f"unknown 2D initial data {args.init!r}")
        u0 = ac2d.field_from_function_2d(nx, ny, lambda x, y: np.sin(x) * np.sin(y))
        cfg = RunConfig(
            SchemeConfig("imex1", args.tau, args.kappa),
            FilterSpec.parse(args.filter),
            t_max=args.tmax,
            tol=args.tol,
            record_every=args.record_every,
            perturbation=_perturbation(args),
        )
        snaps = [float(s) for s in args.snapshot_times.split(",") if s]
        rec = ac2d.run_2d(u0, cfg, snapshot_times=snaps)
        out = args.out
        out.mkdir(parents=True, exist_ok=True)
        write_series2d_csv(out / "series.csv", rec)
        write_grid_csv(out / "final.csv", rec.final_state)
        for t, vals in rec.snapshots:
            heatmap(out / f"snapshot_t{t:g}.png", vals, title=f"t={t:g}")
        write_sidecar(
            out / "meta.txt",
            {
                "kappa": args.kappa,
                "tau": args.tau,
                "modes": f"{nx},{ny}",
                "filter": args.filter,
                "stop_reason": rec.stop_reason,
                "t_final": rec.times[-1],
                "defect_x_final": rec.defect_x[-1],
                "defect_y_final": rec.defect_y[-1],
            },
        )
        print(f"simulate2d: stop={rec.stop_reason} t={rec.times[-1]:g}")
        return 0

    if cmd == "sweep":
        grid = PeriodicGrid1D(args.modes)
        u0 = initial_field(grid, args.init)
        base = RunConfig(
            SchemeConfig("imex1", args.tau, 0.5),
            FilterSpec.parse(args.filter),
            t_max=args.tmax,
            tol=args.tol,
            record_every=args.record_every,
            perturbation=_perturbation(args),
        )
        rows = sweep_kappa(_parse_kappas(args.kappas), base, u0)
        args.out.mkdir(parents=True, exist_ok=True)
        write_sweep_csv(args.out / "sweep.csv", rows)
        for r in rows:
            print(f"kappa={r.kappa:g} max={r.max_abs_final:.6g} verdict={r.verdict} {r.error}")
        return 0

    if cmd == "classify":
        xs, us = read_profile_csv(args.input)
        grid = PeriodicGrid1D(len(xs))
        field = SpectralField1D.from_values(grid, us)
        try:
            result = classify_steady(field, args.kappa)
        except ClassificationError as exc:
            print(f"unclassified: {exc}")
            return 1
        print(f"{result.describe()} (match error {result.match_error:.3e})")
        return 0

    if cmd == "experiment":
        return experiment(args.name, out_root=args.out, fast=args.fast, seed=args.seed)

    if cmd == "list-experiments":
        for name, desc in list_experiments():
            print(f"{name}: {desc}")
        return 0

    raise SystemExit(f"unknown command {cmd}")  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
