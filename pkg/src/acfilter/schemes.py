"""Time-stepping maps: first-order IMEX plus the comparison schemes
(implicit Euler, BDF2 extrapolation, Strang splitting).

Only the IMEX map enters the theorem-mode and acceptance-critical paths;
the other three exist to reproduce the qualitative finding that standard
schemes all break parity under machine-error-like noise.

The arithmetic lives in StepWorkspace kernels that operate on point values
and unnormalized numpy-order spectra (no fftshift in the hot loop); the
public per-step operations wrap them in SpectralField1D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import PeriodicGrid1D, SpectralField1D, raw_to_coeffs

SCHEMES = ("imex1", "implicit_euler", "bdf2x", "strang")

# CLI spellings for --scheme
CLI_SCHEME_NAMES = {
    "imex1": "imex1",
    "ieuler": "implicit_euler",
    "bdf2x": "bdf2x",
    "strang": "strang",
}


class SchemeError(RuntimeError):
    """Inner-solver failure of an implicit scheme."""


@dataclass(frozen=True)
class SchemeConfig:
    scheme: str
    tau: float
    kappa: float

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")


class StepWorkspace:
    """Cached per-mode multipliers for a fixed (grid, config) pair.

    Kernels return (values, raw) where ``raw`` is the unnormalized
    numpy-order spectrum of the new state.
    """

    def __init__(self, grid: PeriodicGrid1D, cfg: SchemeConfig):
        self.grid = grid
        self.cfg = cfg
        ksq = grid.wavenumbers_np.astype(float) ** 2
        self.ksq = ksq
        self.imex_symbol = 1.0 / (1.0 + cfg.kappa**2 * cfg.tau * ksq)
        assert self.imex_symbol[0] == 1.0
        assert np.all((self.imex_symbol > 0.0) & (self.imex_symbol <= 1.0))
        self.bdf2_symbol = 1.0 / (3.0 + 2.0 * cfg.tau * cfg.kappa**2 * ksq)
        self.strang_half = np.exp(-cfg.kappa**2 * ksq * cfg.tau / 2.0)
        self.exp_m2tau = math.exp(-2.0 * cfg.tau)

    def imex1(self, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        rhs = v - self.cfg.tau * (v**3 - v)
        raw = np.fft.fft(rhs)
        raw *= self.imex_symbol
        return np.fft.ifft(raw).real, raw

    def implicit_euler(
        self, v: np.ndarray, tol: float = 1e-13, max_iter: int = 100
    ) -> tuple[np.ndarray, np.ndarray]:
        # fixed point of w = S[u - tau (w^3 - w)] with the IMEX map as
        # preconditioner
        w, raw = self.imex1(v)
        diff = np.inf
        for _ in range(max_iter):
            rhs = v - self.cfg.tau * (w**3 - w)
            raw = np.fft.fft(rhs)
            raw *= self.imex_symbol
            w_next = np.fft.ifft(raw).real
            diff = float(np.max(np.abs(w_next - w)))
            w = w_next
            if diff <= tol:
                return w, raw
        raise SchemeError(
            f"implicit Euler inner iteration stalled, last update {diff:.3e} > {tol:.1e}"
        )

    def bdf2x(
        self, v_now: np.ndarray, v_prev: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        star = 2.0 * v_now - v_prev
        rhs = 4.0 * v_now - v_prev - 2.0 * self.cfg.tau * (star**3 - star)
        raw = np.fft.fft(rhs)
        raw *= self.bdf2_symbol
        return np.fft.ifft(raw).real, raw

    def strang(self, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        raw = np.fft.fft(v)
        raw *= self.strang_half
        mid = _reaction_exact(np.fft.ifft(raw).real, self.exp_m2tau)
        raw = np.fft.fft(mid)
        raw *= self.strang_half
        return np.fft.ifft(raw).real, raw


def _reaction_exact(v: np.ndarray, exp_m2tau: float) -> np.ndarray:
    # u' = u - u^3 solved exactly over one step
    denom = v**2 + (1.0 - v**2) * exp_m2tau
    if np.any(denom <= 0.0):
        raise SchemeError("Strang reaction denominator not positive")
    return v / np.sqrt(denom)


def _wrap(grid, kernel_out) -> SpectralField1D:
    v, raw = kernel_out
    return SpectralField1D._trusted(grid, v, raw_to_coeffs(grid, raw))


def imex1_step(u: SpectralField1D, cfg: SchemeConfig) -> SpectralField1D:
    """w = (1 - kappa^2 tau d_xx)^{-1} [u - tau (u^3 - u)]."""
    return _wrap(u.grid, StepWorkspace(u.grid, cfg).imex1(u.values))


def implicit_euler_step(u: SpectralField1D, cfg: SchemeConfig) -> SpectralField1D:
    """Backward Euler solved by preconditioned fixed-point iteration."""
    return _wrap(u.grid, StepWorkspace(u.grid, cfg).implicit_euler(u.values))


def bdf2x_step(
    u_now: SpectralField1D, u_prev: SpectralField1D, cfg: SchemeConfig
) -> SpectralField1D:
    """(3w - 4u + u_prev)/(2 tau) = kappa^2 w'' - f(2u - u_prev), diagonal solve."""
    ws = StepWorkspace(u_now.grid, cfg)
    return _wrap(u_now.grid, ws.bdf2x(u_now.values, u_prev.values))


def strang_step(u: SpectralField1D, cfg: SchemeConfig) -> SpectralField1D:
    """Half-step diffusion (exact), full-step reaction (exact), half-step diffusion."""
    return _wrap(u.grid, StepWorkspace(u.grid, cfg).strang(u.values))
