import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from acfilter.spectral import (
    PeriodicGrid1D,
    SpectralError,
    SpectralField1D,
    energy,
    field_from_function,
    first_derivative,
    forward_transform,
    h1_norm,
    l2_norm,
    max_norm,
    parity_defect,
    residual,
    second_derivative,
)

EPS = np.finfo(float).eps


def field_values(n=64):
    return arrays(
        np.float64,
        (n,),
        elements=st.floats(-2.0, 2.0, allow_nan=False, allow_infinity=False, width=64),
    )


class TestGrid:
    def test_nodes(self):
        g = PeriodicGrid1D(16)
        assert g.nodes[0] == -np.pi
        assert np.allclose(np.diff(g.nodes), 2 * np.pi / 16)
        # paired nodes j <-> N - j are exact negatives (j = 0 pairs with itself)
        assert np.all(g.nodes[1:] + g.nodes[1:][::-1] == 0.0)

    @pytest.mark.parametrize("n", [7, 6, 9, 0, -4])
    def test_rejects_bad_sizes(self, n):
        with pytest.raises(SpectralError):
            PeriodicGrid1D(n)


class TestTransforms:
    def test_constant(self, grid64):
        c = forward_transform(grid64, np.ones(64))
        k0 = 64 // 2
        assert abs(c[k0] - 1.0) < 10 * EPS
        c[k0] = 0.0
        assert np.max(np.abs(c)) < 10 * EPS

    def test_sin_mode(self, grid64):
        c = forward_transform(grid64, np.sin(grid64.nodes))
        k0 = 64 // 2
        assert abs(c[k0 + 1] - (-0.5j)) < 10 * EPS
        assert abs(c[k0 - 1] - 0.5j) < 10 * EPS

    def test_cos_two_mode(self, grid64):
        c = forward_transform(grid64, np.cos(2 * grid64.nodes))
        k0 = 64 // 2
        assert abs(c[k0 + 2] - 0.5) < 10 * EPS
        assert abs(c[k0 - 2] - 0.5) < 10 * EPS

    def test_length_mismatch(self, grid64):
        with pytest.raises(SpectralError):
            forward_transform(grid64, np.ones(32))

    @given(field_values())
    def test_round_trip(self, vals):
        g = PeriodicGrid1D(64)
        f = SpectralField1D.from_values(g, vals)
        back = SpectralField1D.from_coeffs(g, f.coeffs)
        scale = max(np.max(np.abs(vals)), 1e-300)
        assert np.max(np.abs(back.values - vals)) <= 100 * EPS * scale

    @given(field_values())
    def test_parseval(self, vals):
        g = PeriodicGrid1D(64)
        f = SpectralField1D.from_values(g, vals)
        lhs = g.quad_weight * np.sum(vals**2)
        rhs = 2 * np.pi * np.sum(np.abs(f.coeffs) ** 2)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)

    def test_conjugate_symmetry(self, grid64):
        rng = np.random.default_rng(0)
        f = SpectralField1D.from_values(grid64, rng.standard_normal(64))
        c = f.coeffs
        # index of k and -k in shifted order (skip the unpaired Nyquist)
        for k in range(1, 32):
            assert c[32 + k] == pytest.approx(np.conj(c[32 - k]), abs=1e-14)

    def test_fields_immutable(self, sin_field256):
        with pytest.raises(ValueError):
            sin_field256.values[0] = 1.0


class TestDerivatives:
    def test_sin(self, grid64):
        f = field_from_function(grid64, np.sin)
        assert np.max(np.abs(second_derivative(f).values + np.sin(grid64.nodes))) < 1e-13

    def test_constant(self, grid64):
        f = SpectralField1D.from_values(grid64, np.full(64, 0.7))
        assert np.max(np.abs(second_derivative(f).values)) < 1e-14

    def test_sin3(self, grid64):
        f = field_from_function(grid64, lambda x: np.sin(3 * x))
        assert np.max(
            np.abs(second_derivative(f).values + 9 * np.sin(3 * grid64.nodes))
        ) < 1e-12

    def test_nyquist_zeroed(self, grid64):
        c = np.zeros(64, dtype=complex)
        c[0] = 1.0  # k = -32
        f = SpectralField1D.from_coeffs(grid64, c)
        assert np.max(np.abs(second_derivative(f).coeffs)) == 0.0
        assert np.max(np.abs(first_derivative(f).coeffs)) == 0.0


class TestEnergy:
    def test_zero_state(self, grid64):
        f = SpectralField1D.from_values(grid64, np.zeros(64))
        rep = energy(f, 0.37)
        assert rep.total == pytest.approx(np.pi / 2, abs=1e-13)
        assert rep.gradient_part == 0.0

    def test_one_state(self, grid64):
        f = SpectralField1D.from_values(grid64, np.ones(64))
        assert energy(f, 2.0).total == pytest.approx(0.0, abs=1e-14)

    def test_sin_closed_form(self, sin_field256):
        # int cos^2 = pi, int cos^4 = 3 pi/4 on [-pi, pi]
        expected = 0.5 * 0.81 * np.pi + 3 * np.pi / 16
        rep = energy(sin_field256, 0.9)
        assert rep.total == pytest.approx(expected, rel=1e-13)
        assert rep.total == pytest.approx(rep.gradient_part + rep.potential_part)
        assert rep.gradient_part >= 0 and rep.potential_part >= 0

    @given(field_values())
    def test_nonnegative(self, vals):
        g = PeriodicGrid1D(64)
        f = SpectralField1D.from_values(g, vals)
        assert energy(f, 0.5).total >= 0.0

    def test_rejects_nonpositive_kappa(self, sin_field256):
        with pytest.raises(ValueError):
            energy(sin_field256, 0.0)


class TestResidual:
    def test_exact_steady_states(self, grid64):
        for value in (0.0, 1.0, -1.0):
            f = SpectralField1D.from_values(grid64, np.full(64, value))
            assert residual(f, 0.9) < 1e-13

    def test_sin_closed_form(self, sin_field256):
        # ||(1-k^2) sin - sin^3||_2^2 = pi (a^2 - 1.5 a + 0.625), a = 1 - k^2
        a = 1 - 0.81
        expected = np.sqrt(np.pi * (a * a - 1.5 * a + 0.625))
        assert residual(sin_field256, 0.9) == pytest.approx(expected, rel=1e-12)

    def test_ground_state_profile(self, grid256):
        from acfilter.ground_state import profile

        gs = profile(0.9, grid256)
        f = SpectralField1D.from_values(grid256, gs.profile)
        assert residual(f, 0.9) <= 1e-6


class TestNorms:
    def test_h1_of_sin(self, sin_field256):
        # ||sin||_2^2 = pi, ||cos||_2^2 = pi
        assert h1_norm(sin_field256) == pytest.approx(np.sqrt(2 * np.pi), rel=1e-12)

    def test_l2_max(self, grid64):
        v = np.ones(64)
        assert l2_norm(grid64, v) == pytest.approx(np.sqrt(2 * np.pi), rel=1e-14)
        assert max_norm(-3.0 * v) == 3.0

    def test_parity_defect_odd(self, grid64):
        assert parity_defect(np.sin(grid64.nodes)) < 1e-15
        assert parity_defect(np.cos(grid64.nodes)) == pytest.approx(2.0)
