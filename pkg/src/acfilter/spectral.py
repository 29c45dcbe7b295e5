"""Periodic spectral grid on [-pi, pi), DFT pair, differentiation, energy and residual.

Conventions used throughout the package:

* nodes x_j = -pi + 2*pi*j/N, stored so that x and -x are exact floating-point
  negatives at paired indices j and (N - j) % N;
* Fourier coefficients c(k) = (1/N) * sum_j u(x_j) exp(-i k x_j) for
  k = -N/2 .. N/2 - 1 (fftshift order), so u = sin(x) has c(1) = -i/2;
* integrals are the trapezoidal rule on the uniform periodic grid, i.e.
  weight 2*pi/N per node (spectrally accurate for smooth periodic integrands).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

TWO_PI = 2.0 * np.pi


class SpectralError(ValueError):
    """Inconsistent grid or field construction."""


@dataclass(frozen=True)
class PeriodicGrid1D:
    """Uniform periodic grid with an even number of nodes, N >= 8."""

    n_modes: int

    def __post_init__(self):
        n = self.n_modes
        if n % 2 != 0 or n < 8:
            raise SpectralError(f"n_modes must be even and >= 8, got {n}")

    @cached_property
    def nodes(self) -> np.ndarray:
        # (2*pi*m)/N with integer m keeps paired nodes exact negatives of
        # each other, which the parity filters rely on.
        m = np.arange(self.n_modes) - self.n_modes // 2
        x = (TWO_PI * m) / self.n_modes
        x.flags.writeable = False
        return x

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        k = np.arange(-self.n_modes // 2, self.n_modes // 2)
        k.flags.writeable = False
        return k

    @cached_property
    def _phase(self) -> np.ndarray:
        # (-1)^k in numpy fft order equals (-1)^j because k = j mod N and N even.
        p = np.where(np.arange(self.n_modes) % 2 == 0, 1.0, -1.0)
        p.flags.writeable = False
        return p

    @cached_property
    def wavenumbers_np(self) -> np.ndarray:
        """Integer wavenumbers in numpy fft order (0..N/2-1, -N/2..-1)."""
        k = np.fft.fftfreq(self.n_modes, 1.0 / self.n_modes).astype(int)
        k.flags.writeable = False
        return k

    @property
    def spacing(self) -> float:
        return TWO_PI / self.n_modes

    @property
    def quad_weight(self) -> float:
        """Trapezoidal weight per node on the periodic grid."""
        return TWO_PI / self.n_modes


def forward_transform(grid: PeriodicGrid1D, values: np.ndarray) -> np.ndarray:
    """Coefficients c(k) = (1/N) sum_j u(x_j) e^{-ikx_j}, k = -N/2..N/2-1."""
    values = np.asarray(values)
    if values.shape != (grid.n_modes,):
        raise SpectralError(
            f"expected {grid.n_modes} samples, got shape {values.shape}"
        )
    f = np.fft.fft(values) * (grid._phase / grid.n_modes)
    return np.fft.fftshift(f)


def inverse_transform(grid: PeriodicGrid1D, coeffs: np.ndarray) -> np.ndarray:
    """Synthesize real point values u(x_j) = sum_k c(k) e^{ikx_j}.

    The residual imaginary round-off of the synthesis is discarded; callers
    are expected to pass conjugate-symmetric coefficients.
    """
    coeffs = np.asarray(coeffs)
    if coeffs.shape != (grid.n_modes,):
        raise SpectralError(
            f"expected {grid.n_modes} coefficients, got shape {coeffs.shape}"
        )
    g = np.fft.ifftshift(coeffs) * grid._phase
    return np.real(np.fft.ifft(g) * grid.n_modes)


def raw_to_coeffs(grid: PeriodicGrid1D, raw: np.ndarray) -> np.ndarray:
    """Convert an unnormalized numpy-order spectrum (np.fft.fft output) to
    the package convention (1/N scale, node phase, fftshift order)."""
    return np.fft.fftshift(raw * (grid._phase / grid.n_modes))


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class SpectralField1D:
    """Real periodic grid function together with its Fourier coefficients.

    Immutable after construction; all operations return new fields.
    """

    grid: PeriodicGrid1D
    values: np.ndarray
    coeffs: np.ndarray

    @classmethod
    def from_values(cls, grid: PeriodicGrid1D, values) -> "SpectralField1D":
        values = np.asarray(values, dtype=float).copy()
        coeffs = forward_transform(grid, values)
        return cls(grid, _freeze(values), _freeze(coeffs))

    @classmethod
    def from_coeffs(cls, grid: PeriodicGrid1D, coeffs) -> "SpectralField1D":
        coeffs = np.asarray(coeffs, dtype=complex).copy()
        values = inverse_transform(grid, coeffs)
        return cls(grid, _freeze(values), _freeze(coeffs))

    @classmethod
    def _trusted(cls, grid, values, coeffs) -> "SpectralField1D":
        # Internal fast path: both representations already consistent.
        return cls(grid, _freeze(values), _freeze(coeffs))


def field_from_function(grid: PeriodicGrid1D, fn) -> SpectralField1D:
    return SpectralField1D.from_values(grid, fn(grid.nodes))


@dataclass(frozen=True)
class EnergyReport:
    """Energy split into gradient and double-well potential contributions."""

    total: float
    gradient_part: float
    potential_part: float


def second_derivative(u: SpectralField1D) -> SpectralField1D:
    """Spectral d^2/dx^2; the Nyquist mode k = -N/2 is mapped to zero."""
    k = u.grid.wavenumbers
    c = u.coeffs * (-(k.astype(float) ** 2))
    c[0] = 0.0
    return SpectralField1D.from_coeffs(u.grid, c)


def first_derivative(u: SpectralField1D) -> SpectralField1D:
    """Spectral d/dx with the Nyquist mode zeroed (keeps the result real)."""
    c = u.coeffs * (1j * u.grid.wavenumbers)
    c[0] = 0.0
    return SpectralField1D.from_coeffs(u.grid, c)


def energy(u: SpectralField1D, kappa: float) -> EnergyReport:
    """E(u) = int( kappa^2/2 u_x^2 + (1 - u^2)^2 / 4 ) dx over the torus."""
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    w = u.grid.quad_weight
    ux = first_derivative(u).values
    grad = 0.5 * kappa * kappa * w * float(np.sum(ux * ux))
    pot = 0.25 * w * float(np.sum((1.0 - u.values**2) ** 2))
    return EnergyReport(total=grad + pot, gradient_part=grad, potential_part=pot)


def residual(u: SpectralField1D, kappa: float) -> float:
    """L2 norm of the steady-state defect kappa^2 u'' + u - u^3."""
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    r = kappa * kappa * second_derivative(u).values + u.values - u.values**3
    return l2_norm(u.grid, r)


def l2_norm(grid: PeriodicGrid1D, values: np.ndarray) -> float:
    return float(np.sqrt(grid.quad_weight * np.sum(np.asarray(values) ** 2)))


def max_norm(values: np.ndarray) -> float:
    return float(np.max(np.abs(values)))


def h1_norm(u: SpectralField1D) -> float:
    """Sobolev norm sqrt(||u||_2^2 + ||u_x||_2^2), evaluated in coefficient space."""
    k = u.grid.wavenumbers.astype(float).copy()
    k[0] = 0.0  # Nyquist convention matches first_derivative
    sq = TWO_PI * np.sum((1.0 + k * k) * np.abs(u.coeffs) ** 2)
    return float(np.sqrt(sq))


def h1_norm_values(grid: PeriodicGrid1D, values: np.ndarray) -> float:
    return h1_norm(SpectralField1D.from_values(grid, values))


def parity_defect(values: np.ndarray) -> float:
    """max_j |u(x_j) + u(-x_j)| over the grid (node pairing j <-> (N-j) % N)."""
    v = np.asarray(values)
    return float(np.max(np.abs(v + np.roll(v[::-1], 1))))
