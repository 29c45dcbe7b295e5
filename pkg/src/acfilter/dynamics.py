"""Run driver: iterate a scheme with optional per-step filter and optional
machine-error injection, record diagnostics, apply the stopping rule.

The loop per iteration is: step, add noise, filter, record. The stopping
residual is the step-difference rate ||v^{n+1} - v^n||_inf / tau, which
vanishes exactly at fixed points of every scheme; the PDE defect
||kappa^2 u'' + u - u^3||_2 is recorded alongside as a secondary diagnostic.

The loop works on point values plus unnormalized numpy-order spectra; with
the package normalization (1/N forward) Parseval reads

    ||u||_2^2 = (2 pi / N^2) sum_k |raw(k)|^2.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .filters import FilterSpec, make_raw_filter, project_odd_raw
from .ground_state import ClassificationError, classify_steady
from .schemes import SchemeConfig, SchemeError, StepWorkspace
from .spectral import TWO_PI, PeriodicGrid1D, SpectralField1D, parity_defect, raw_to_coeffs


class TheoremCheckError(RuntimeError):
    """A theorem-mode per-step assertion failed."""


@dataclass(frozen=True)
class PerturbationConfig:
    """Machine-error model: per-step noise with exact H1 norm eps_star.

    Noise coefficients are drawn on [band_min, band_max] in |k|, projected
    onto the requested parity, then rescaled so the H1 norm equals eps_star.
    """

    eps_star: float
    parity: str = "even"  # "odd" | "even" | "unconstrained"
    band_min: int = 0
    band_max: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.eps_star < 0:
            raise ValueError("eps_star must be >= 0")
        if self.parity not in ("odd", "even", "unconstrained"):
            raise ValueError(f"unknown noise parity {self.parity!r}")


@dataclass(frozen=True)
class RunConfig:
    scheme_cfg: SchemeConfig
    filter: FilterSpec = field(default_factory=lambda: FilterSpec("none"))
    t_max: float = 1e5
    tol: float = 1e-12
    record_every: int = 100
    perturbation: Optional[PerturbationConfig] = None
    theorem_mode: bool = False

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")


@dataclass
class RunRecord:
    times: np.ndarray
    energies: np.ndarray
    residuals: np.ndarray
    max_abs: np.ndarray
    u_at_zero: np.ndarray
    pde_residuals: np.ndarray
    parity_defects: np.ndarray
    final_state: SpectralField1D
    stop_reason: str  # tol_reached | t_max_reached | scheme_error
    # extrema of E(v^n): over every step in theorem mode, else over the
    # recorded subsequence
    energy_lo: float = np.nan
    energy_hi: float = np.nan


class _NoiseSource:
    """Deterministic per-step noise stream in raw spectral form."""

    def __init__(self, grid: PeriodicGrid1D, pc: PerturbationConfig):
        self.rng = np.random.default_rng(pc.seed)
        self.pc = pc
        self.n = grid.n_modes
        k = grid.wavenumbers_np
        band_max = pc.band_max if pc.band_max is not None else grid.n_modes // 2 - 1
        self.band_mask = (np.abs(k) < pc.band_min) | (np.abs(k) > band_max)
        ksq = k.astype(float) ** 2
        ksq[self.n // 2] = 0.0  # Nyquist convention of the derivative
        self.h1_weights = (TWO_PI / self.n**2) * (1.0 + ksq)

    def draw_raw(self) -> np.ndarray:
        raw = np.fft.fft(self.rng.standard_normal(self.n))
        raw[self.band_mask] = 0.0
        if self.pc.parity == "odd":
            raw = project_odd_raw(raw)
        elif self.pc.parity == "even":
            raw = raw.real.astype(complex)
        h1_sq = float(np.sum(self.h1_weights * np.abs(raw) ** 2))
        if h1_sq == 0.0:
            return raw
        return raw * (self.pc.eps_star / math.sqrt(h1_sq))


def _energy_raw(values, raw, kappa, parseval_ksq, quad_weight) -> float:
    grad_sq = float(np.sum(parseval_ksq * np.abs(raw) ** 2))
    pot = 0.25 * quad_weight * float(np.sum((1.0 - values**2) ** 2))
    return 0.5 * kappa * kappa * grad_sq + pot


def run(u0: SpectralField1D, cfg: RunConfig) -> RunRecord:
    """Iterate until the residual drops below tol or t reaches t_max.

    In theorem mode (tau in [sqrt(eps_star), 1/2] expected) every accepted
    IMEX step is checked against the discrete energy inequality

        E(w) + ||w-u||_2^2/(5 tau) + kappa^2/2 ||d_x(w-u)||_2^2 <= E(u)

    and the max-norm bound ||u^n||_inf <= 1.1; violations raise
    TheoremCheckError.
    """
    grid = u0.grid
    scfg = cfg.scheme_cfg
    ws = StepWorkspace(grid, scfg)
    n_modes = grid.n_modes
    tau = scfg.tau
    kappa = scfg.kappa
    w_quad = grid.quad_weight

    ksq = grid.wavenumbers_np.astype(float) ** 2
    ksq[n_modes // 2] = 0.0  # Nyquist zeroed, matching first_derivative
    parseval_ksq = (TWO_PI / n_modes**2) * ksq

    noise = _NoiseSource(grid, cfg.perturbation) if cfg.perturbation else None
    raw_filter = make_raw_filter(cfg.filter, k_np=grid.wavenumbers_np)

    raw = np.fft.fft(u0.values)
    if noise is not None:
        raw = raw + noise.draw_raw()
    if raw_filter is not None:
        raw = raw_filter(raw)
    v = np.fft.ifft(raw).real

    v_prev = None  # bdf2x history
    times, energies, residuals, max_abs, u_zero, pde_res, par_def = (
        [], [], [], [], [], [], []
    )
    i_zero = n_modes // 2

    def record(n, res):
        times.append(n * tau)
        energies.append(_energy_raw(v, raw, kappa, parseval_ksq, w_quad))
        residuals.append(res)
        max_abs.append(float(np.max(np.abs(v))))
        u_zero.append(float(v[i_zero]))
        d2 = np.fft.ifft(raw * (-ksq)).real
        pde_res.append(
            float(np.sqrt(w_quad * np.sum((kappa**2 * d2 + v - v**3) ** 2)))
        )
        par_def.append(parity_defect(v))

    record(0, np.nan)
    energy_curr = energies[0]
    energy_lo = energy_hi = energy_curr
    n_max = int(np.ceil(cfg.t_max / tau))
    stop_reason = "t_max_reached"
    n = 0
    while n < n_max:
        n += 1
        try:
            if scfg.scheme == "imex1":
                w_vals, w_raw = ws.imex1(v)
            elif scfg.scheme == "implicit_euler":
                w_vals, w_raw = ws.implicit_euler(v)
            elif scfg.scheme == "bdf2x":
                if v_prev is None:
                    w_vals, w_raw = ws.imex1(v)
                else:
                    w_vals, w_raw = ws.bdf2x(v, v_prev)
            elif scfg.scheme == "strang":
                w_vals, w_raw = ws.strang(v)
            else:  # pragma: no cover
                raise ValueError(scfg.scheme)
        except SchemeError:
            stop_reason = "scheme_error"
            record(n - 1, residuals[-1] if len(residuals) > 1 else np.nan)
            break

        if cfg.theorem_mode:
            energy_w = _energy_raw(w_vals, w_raw, kappa, parseval_ksq, w_quad)
            diff = w_vals - v
            l2_sq = w_quad * float(np.sum(diff * diff))
            dx_sq = float(np.sum(parseval_ksq * np.abs(w_raw - raw) ** 2))
            lhs = energy_w + l2_sq / (5.0 * tau) + 0.5 * kappa**2 * dx_sq
            if lhs > energy_curr + 1e-12:
                raise TheoremCheckError(
                    f"energy inequality violated at step {n}: {lhs} > {energy_curr}"
                )
            if float(np.max(np.abs(w_vals))) > 1.1:
                raise TheoremCheckError(f"max-norm bound 1.1 violated at step {n}")

        if noise is not None:
            w_raw = w_raw + noise.draw_raw()
        if raw_filter is not None or noise is not None:
            if raw_filter is not None:
                w_raw = raw_filter(w_raw)
            v_new = np.fft.ifft(w_raw).real
        else:
            v_new = w_vals

        res = float(np.max(np.abs(v_new - v))) / tau
        v_prev = v
        v, raw = v_new, w_raw
        if cfg.theorem_mode:
            energy_curr = _energy_raw(v, raw, kappa, parseval_ksq, w_quad)
            energy_lo = min(energy_lo, energy_curr)
            energy_hi = max(energy_hi, energy_curr)
            if float(np.max(np.abs(v))) > 1.1:
                raise TheoremCheckError(f"max-norm bound 1.1 violated at step {n}")
        if res <= cfg.tol:
            record(n, res)
            stop_reason = "tol_reached"
            break
        if n % cfg.record_every == 0 or n == n_max:
            record(n, res)

    final = SpectralField1D._trusted(grid, v, raw_to_coeffs(grid, raw))
    energies_arr = np.asarray(energies)
    if not cfg.theorem_mode:
        energy_lo = float(energies_arr.min())
        energy_hi = float(energies_arr.max())
    return RunRecord(
        times=np.asarray(times),
        energies=energies_arr,
        residuals=np.asarray(residuals),
        max_abs=np.asarray(max_abs),
        u_at_zero=np.asarray(u_zero),
        pde_residuals=np.asarray(pde_res),
        parity_defects=np.asarray(par_def),
        final_state=final,
        stop_reason=stop_reason,
        energy_lo=energy_lo,
        energy_hi=energy_hi,
    )


@dataclass
class SweepRow:
    kappa: float
    max_abs_final: float
    verdict: str
    energy_final: float
    stop_reason: str
    error: str = ""


def sweep_kappa(
    kappas,
    base_cfg: RunConfig,
    u0: SpectralField1D,
    max_workers: int = 4,
) -> list[SweepRow]:
    """Independent runs over a kappa grid; per-kappa failures are recorded
    in the row and the sweep continues."""
    kappas = list(kappas)
    seeds = None
    if base_cfg.perturbation is not None:
        seeds = [
            int(s.generate_state(1)[0])
            for s in np.random.SeedSequence(base_cfg.perturbation.seed).spawn(len(kappas))
        ]

    def one(idx_kappa):
        idx, kap = idx_kappa
        try:
            cfg = replace(base_cfg, scheme_cfg=replace(base_cfg.scheme_cfg, kappa=kap))
            if seeds is not None:
                cfg = replace(cfg, perturbation=replace(base_cfg.perturbation, seed=seeds[idx]))
            rec = run(u0, cfg)
        except Exception as exc:  # noqa: BLE001 - recorded per row
            return SweepRow(kap, np.nan, "", np.nan, "", error=repr(exc))
        try:
            verdict = classify_steady(rec.final_state, kap).describe()
        except ClassificationError as exc:
            verdict = f"unclassified({exc})"
        return SweepRow(
            kap,
            float(rec.max_abs[-1]),
            verdict,
            float(rec.energies[-1]),
            rec.stop_reason,
        )

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        rows = list(pool.map(one, enumerate(kappas)))
    return rows


def amplification_demo(u0: float, t_end: float) -> float:
    """Exact solution u0 * exp(t) of the testing ODE u' = u at t = t_end."""
    if u0 == 0.0:
        return 0.0
    return u0 * math.exp(t_end)


def amplification_trace(
    u0: float, t_end: float, dt: float = 0.01
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(times, forward-Euler trace, exact trace) for illustration output."""
    n = int(round(t_end / dt))
    times = np.arange(n + 1) * dt
    euler = u0 * (1.0 + dt) ** np.arange(n + 1)
    exact = u0 * np.exp(times)
    return times, euler, exact
