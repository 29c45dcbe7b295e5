"""CSV and sidecar writers. All numbers are emitted with 17 significant
digits so repeated runs produce bit-identical files; sidecars are plain
``key: value`` text."""

from __future__ import annotations

from pathlib import Path

import numpy as np

FMT = "%.17g"


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return FMT % x
    return str(x)


def write_csv(path, header: list[str], columns: list) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = zip(*columns)
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def write_profile_csv(path, x: np.ndarray, u: np.ndarray) -> None:
    write_csv(path, ["x", "u"], [x, u])


def read_profile_csv(path) -> tuple[np.ndarray, np.ndarray]:
    data = np.genfromtxt(path, delimiter=",", names=True)
    return np.asarray(data["x"], dtype=float), np.asarray(data["u"], dtype=float)


def write_series_csv(path, record) -> None:
    write_csv(
        path,
        ["t", "energy", "residual", "max_abs", "u_at_zero", "pde_residual", "parity_defect"],
        [
            record.times,
            record.energies,
            record.residuals,
            record.max_abs,
            record.u_at_zero,
            record.pde_residuals,
            record.parity_defects,
        ],
    )


def write_series2d_csv(path, record) -> None:
    write_csv(
        path,
        ["t", "energy", "residual", "max_abs", "defect_x", "defect_y"],
        [
            record.times,
            record.energies,
            record.residuals,
            record.max_abs,
            record.defect_x,
            record.defect_y,
        ],
    )


def write_sweep_csv(path, rows) -> None:
    write_csv(
        path,
        ["kappa", "max_abs_final", "verdict", "energy_final", "stop_reason", "error"],
        [
            [r.kappa for r in rows],
            [r.max_abs_final for r in rows],
            [r.verdict for r in rows],
            [r.energy_final for r in rows],
            [r.stop_reason for r in rows],
            [r.error for r in rows],
        ],
    )


def write_grid_csv(path, field2d) -> None:
    """Tensor grid dump as x,y,u rows (x outer, y inner)."""
    xs = field2d.x_nodes
    ys = field2d.y_nodes
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write("x,y,u\n")
        for i, x in enumerate(xs):
            row = field2d.values[i]
            for y, u in zip(ys, row):
                fh.write(f"{FMT % x},{FMT % y},{FMT % u}\n")


def write_sidecar(path, entries: dict) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        for key, value in entries.items():
            fh.write(f"{key}: {_fmt(value)}\n")


def read_sidecar(path) -> dict:
    out = {}
    for line in Path(path).read_text().splitlines():
        if ":" in line:
            key, value = line.split(":", 1)
            out[key.strip()] = value.strip()
    return out
