"""Spectral Allen-Cahn toolkit: IMEX dynamics, parity-preserving Fourier
filters, an independent ground-state oracle, and a steady-state classifier."""

__version__ = "0.1.0"
