"""Symmetry-preserving Fourier filters.

All three filters are orthogonal projections applied in coefficient space,
followed by one inverse transform; point values are never averaged. Applied
once per time step they keep the iterates inside the symmetric cone the
initial data started in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import PeriodicGrid1D, SpectralField1D, inverse_transform


@dataclass(frozen=True)
class FilterSpec:
    """Filter selection for a run: none, odd, gap:L or sym2d."""

    kind: str  # "none" | "odd" | "gap" | "sym2d"
    gap: int = 1

    def __post_init__(self):
        if self.kind not in ("none", "odd", "gap", "sym2d"):
            raise ValueError(f"unknown filter kind {self.kind!r}")
        if self.kind == "gap" and self.gap < 1:
            raise ValueError("spectral gap L must be >= 1")

    @classmethod
    def parse(cls, text: str) -> "FilterSpec":
        text = text.strip()
        if text in ("none", "odd", "sym2d"):
            return cls(text)
        if text.startswith("gap:"):
            return cls("gap", gap=int(text.split(":", 1)[1]))
        raise ValueError(f"unknown filter spec {text!r}")

    def to_string(self) -> str:
        return f"gap:{self.gap}" if self.kind == "gap" else self.kind


def project_odd_coeffs(coeffs: np.ndarray) -> np.ndarray:
    """c(0) <- 0, c(k) <- i*Im c(k), Nyquist <- 0 (fftshift order)."""
    n = coeffs.shape[0]
    out = 1j * coeffs.imag
    out[0] = 0.0  # k = -N/2
    out[n // 2] = 0.0  # k = 0
    return out


def project_gap_coeffs(coeffs: np.ndarray, gap: int) -> np.ndarray:
    out = project_odd_coeffs(coeffs)
    n = out.shape[0]
    k = np.arange(-n // 2, n // 2)
    out[k % gap != 0] = 0.0
    return out


def odd_filter_1d(u: SpectralField1D) -> SpectralField1D:
    """Project onto the sine cone: zero mean, purely imaginary coefficients."""
    c = project_odd_coeffs(u.coeffs)
    return SpectralField1D._trusted(u.grid, inverse_transform(u.grid, c), c)


def gap_filter_1d(u: SpectralField1D, gap: int) -> SpectralField1D:
    """Odd filter plus removal of every mode whose index is not a multiple of gap."""
    if gap < 1:
        raise ValueError("spectral gap L must be >= 1")
    c = project_gap_coeffs(u.coeffs, gap)
    return SpectralField1D._trusted(u.grid, inverse_transform(u.grid, c), c)


def _antisymmetrize_axis(coeffs: np.ndarray, axis: int) -> np.ndarray:
    # index i holds wavenumber k = i - N/2; negation k -> -k maps i -> (N - i) % N,
    # which sends the unpaired Nyquist row to itself and hence to zero.
    flipped = np.roll(np.flip(coeffs, axis=axis), 1, axis=axis)
    return 0.5 * (coeffs - flipped)


def project_sym2d_coeffs(coeffs: np.ndarray) -> np.ndarray:
    """2D sine-sine cone projection, steps applied in the fixed order:

    zero the k1 = 0 and k2 = 0 lines, drop imaginary parts, antisymmetrize
    in k1, then antisymmetrize in k2.
    """
    nx, ny = coeffs.shape
    out = coeffs.copy()
    out[nx // 2, :] = 0.0
    out[:, ny // 2] = 0.0
    out = out.real.astype(complex)
    out = _antisymmetrize_axis(out, axis=0)
    out = _antisymmetrize_axis(out, axis=1)
    return out


def sym_filter_2d(u):
    """Apply the four-step 2D symmetry filter to a SpectralField2D."""
    from .ac2d import SpectralField2D, inverse_transform_2d

    c = project_sym2d_coeffs(u.coeffs)
    return SpectralField2D._trusted(u.nx, u.ny, inverse_transform_2d(c), c)


def apply_filter_coeffs(coeffs: np.ndarray, spec: FilterSpec) -> np.ndarray:
    """Coefficient-space dispatch used by the run drivers."""
    if spec.kind == "none":
        return coeffs
    if spec.kind == "odd":
        return project_odd_coeffs(coeffs)
    if spec.kind == "gap":
        return project_gap_coeffs(coeffs, spec.gap)
    if spec.kind == "sym2d":
        return project_sym2d_coeffs(coeffs)
    raise ValueError(f"unknown filter kind {spec.kind!r}")


# --- raw (numpy fft order) variants for the hot loops ---------------------
#
# The projections commute with the 1/N scaling and the real node-phase
# factors that relate raw spectra to the package's coefficient convention,
# so they may be applied directly to np.fft.fft output. Only the positions
# of the k = 0 and Nyquist entries differ from the shifted layout.


def project_odd_raw(raw: np.ndarray) -> np.ndarray:
    out = 1j * raw.imag
    out[0] = 0.0  # k = 0
    out[raw.shape[0] // 2] = 0.0  # Nyquist
    return out


def project_gap_raw(raw: np.ndarray, gap: int, k_np: np.ndarray) -> np.ndarray:
    out = project_odd_raw(raw)
    out[k_np % gap != 0] = 0.0
    return out


def project_sym2d_raw(raw: np.ndarray) -> np.ndarray:
    out = raw.copy()
    out[0, :] = 0.0  # k1 = 0
    out[:, 0] = 0.0  # k2 = 0
    out = out.real.astype(complex)
    out = _antisymmetrize_axis(out, axis=0)
    out = _antisymmetrize_axis(out, axis=1)
    return out


def make_raw_filter(spec: FilterSpec, k_np: np.ndarray = None):
    """Callable raw-spectrum projection for a FilterSpec (None for 'none')."""
    if spec.kind == "none":
        return None
    if spec.kind == "odd":
        return project_odd_raw
    if spec.kind == "gap":
        return lambda raw: project_gap_raw(raw, spec.gap, k_np)
    if spec.kind == "sym2d":
        return project_sym2d_raw
    raise ValueError(f"unknown filter kind {spec.kind!r}")
