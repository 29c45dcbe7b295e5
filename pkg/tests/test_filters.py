import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from acfilter.ac2d import SpectralField2D, field_from_function_2d
from acfilter.filters import (
    FilterSpec,
    gap_filter_1d,
    odd_filter_1d,
    sym_filter_2d,
)
from acfilter.spectral import PeriodicGrid1D, SpectralField1D, l2_norm

EPS = np.finfo(float).eps


def field_values(n=64):
    return arrays(
        np.float64,
        (n,),
        elements=st.floats(-2.0, 2.0, allow_nan=False, allow_infinity=False, width=64),
    )


def make_field(vals):
    return SpectralField1D.from_values(PeriodicGrid1D(len(vals)), vals)


class TestFilterSpec:
    @pytest.mark.parametrize(
        "text,kind,gap",
        [("none", "none", 1), ("odd", "odd", 1), ("gap:3", "gap", 3), ("sym2d", "sym2d", 1)],
    )
    def test_parse_round_trip(self, text, kind, gap):
        spec = FilterSpec.parse(text)
        assert spec.kind == kind and spec.gap == gap
        assert spec.to_string() == text

    def test_rejects_bad(self):
        with pytest.raises(ValueError):
            FilterSpec.parse("hexagonal")
        with pytest.raises(ValueError):
            FilterSpec("gap", gap=0)


class TestOddFilter:
    def test_sin_unchanged(self, grid64):
        f = SpectralField1D.from_values(grid64, np.sin(grid64.nodes))
        out = odd_filter_1d(f)
        assert np.max(np.abs(out.values - f.values)) < 10 * EPS

    def test_cos_killed(self, grid64):
        f = SpectralField1D.from_values(grid64, np.cos(grid64.nodes))
        assert np.max(np.abs(odd_filter_1d(f).values)) < 10 * EPS

    def test_mixed_projection(self, grid64):
        x = grid64.nodes
        f = SpectralField1D.from_values(grid64, 0.1 + np.sin(2 * x) + 0.3 * np.cos(5 * x))
        out = odd_filter_1d(f)
        assert np.max(np.abs(out.values - np.sin(2 * x))) < 1e-14

    @given(field_values())
    def test_exact_grid_parity(self, vals):
        out = odd_filter_1d(make_field(vals)).values
        scale = max(np.max(np.abs(out)), 1e-300)
        defect = np.max(np.abs(out + np.roll(out[::-1], 1)))
        assert defect <= 10 * EPS * scale
        # endpoints of the odd cone vanish
        n = len(vals)
        assert abs(out[0]) <= 10 * EPS * scale
        assert abs(out[n // 2]) <= 10 * EPS * scale

    @given(field_values())
    def test_idempotent_bitwise(self, vals):
        once = odd_filter_1d(make_field(vals))
        twice = odd_filter_1d(once)
        assert np.array_equal(once.values, twice.values)
        assert np.array_equal(once.coeffs, twice.coeffs)

    @given(field_values(), field_values(), st.floats(-3, 3, width=64), st.floats(-3, 3, width=64))
    def test_linear(self, u, v, a, b):
        g = PeriodicGrid1D(64)
        lhs = odd_filter_1d(SpectralField1D.from_values(g, a * u + b * v)).values
        rhs = (
            a * odd_filter_1d(SpectralField1D.from_values(g, u)).values
            + b * odd_filter_1d(SpectralField1D.from_values(g, v)).values
        )
        scale = max(1.0, abs(a) * np.max(np.abs(u)) + abs(b) * np.max(np.abs(v)))
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale

    @given(field_values())
    def test_contractive(self, vals):
        f = make_field(vals)
        out = odd_filter_1d(f)
        g = f.grid
        assert l2_norm(g, out.values) <= l2_norm(g, vals) * (1 + 1e-13) + 1e-300


class TestGapFilter:
    def test_sin2_kept(self, grid64):
        f = SpectralField1D.from_values(grid64, np.sin(2 * grid64.nodes))
        out = gap_filter_1d(f, 2)
        assert np.max(np.abs(out.values - f.values)) < 1e-14

    def test_off_gap_removed(self, grid64):
        x = grid64.nodes
        f = SpectralField1D.from_values(grid64, np.sin(2 * x) + 0.5 * np.sin(3 * x))
        out = gap_filter_1d(f, 2)
        assert np.max(np.abs(out.values - np.sin(2 * x))) < 1e-14

    def test_cos4_killed(self, grid64):
        f = SpectralField1D.from_values(grid64, np.cos(4 * grid64.nodes))
        assert np.max(np.abs(gap_filter_1d(f, 2).values)) < 1e-14

    def test_output_in_sine_span(self, grid64):
        rng = np.random.default_rng(1)
        f = SpectralField1D.from_values(grid64, rng.standard_normal(64))
        out = gap_filter_1d(f, 4)
        k = grid64.wavenumbers
        off = out.coeffs[k % 4 != 0]
        assert np.max(np.abs(off)) == 0.0
        assert np.max(np.abs(out.coeffs.real)) == 0.0

    @given(field_values())
    def test_gap_one_equals_odd(self, vals):
        f = make_field(vals)
        a = gap_filter_1d(f, 1)
        b = odd_filter_1d(f)
        assert np.array_equal(a.values, b.values)
        assert np.array_equal(a.coeffs, b.coeffs)

    @given(field_values())
    def test_idempotent_bitwise(self, vals):
        once = gap_filter_1d(make_field(vals), 3)
        twice = gap_filter_1d(once, 3)
        assert np.array_equal(once.values, twice.values)


class TestSym2D:
    def test_sinsin_fixed(self):
        u = field_from_function_2d(32, 32, lambda x, y: np.sin(x) * np.sin(y))
        out = sym_filter_2d(u)
        assert np.max(np.abs(out.values - u.values)) < 10 * EPS

    def test_cossin_killed(self):
        u = field_from_function_2d(32, 32, lambda x, y: np.cos(x) * np.sin(y))
        assert np.max(np.abs(sym_filter_2d(u).values)) < 10 * EPS

    def test_constant_killed(self):
        u = field_from_function_2d(32, 32, lambda x, y: 0.7 + 0 * x + 0 * y)
        assert np.max(np.abs(sym_filter_2d(u).values)) == 0.0

    def test_output_symmetries(self):
        rng = np.random.default_rng(2)
        u = SpectralField2D.from_values(rng.standard_normal((32, 32)))
        out = sym_filter_2d(u)
        v = out.values
        scale = max(np.max(np.abs(v)), 1e-300)
        assert np.max(np.abs(v + np.roll(v[::-1, :], 1, axis=0))) <= 10 * EPS * scale
        assert np.max(np.abs(v + np.roll(v[:, ::-1], 1, axis=1))) <= 10 * EPS * scale

    def test_coefficient_cone(self):
        rng = np.random.default_rng(3)
        u = SpectralField2D.from_values(rng.standard_normal((32, 32)))
        c = sym_filter_2d(u).coeffs
        assert np.max(np.abs(c.imag)) == 0.0
        assert np.max(np.abs(c[16, :])) == 0.0  # k1 = 0 line
        assert np.max(np.abs(c[:, 16])) == 0.0  # k2 = 0 line
        # odd in k1: c(k1, k2) + c(-k1, k2) = 0
        flip = np.roll(np.flip(c, axis=0), 1, axis=0)
        assert np.max(np.abs(c + flip)) < 1e-15

    def test_idempotent_bitwise(self):
        rng = np.random.default_rng(4)
        u = SpectralField2D.from_values(rng.standard_normal((32, 32)))
        once = sym_filter_2d(u)
        twice = sym_filter_2d(once)
        assert np.array_equal(once.values, twice.values)
        assert np.array_equal(once.coeffs, twice.coeffs)

    def test_separable_equals_tensor_of_1d(self):
        rng = np.random.default_rng(5)
        fx = rng.standard_normal(32)
        gy = rng.standard_normal(32)
        out = sym_filter_2d(SpectralField2D.from_values(np.outer(fx, gy)))
        g1 = PeriodicGrid1D(32)
        fxo = odd_filter_1d(SpectralField1D.from_values(g1, fx)).values
        gyo = odd_filter_1d(SpectralField1D.from_values(g1, gy)).values
        assert np.max(np.abs(out.values - np.outer(fxo, gyo))) < 1e-14
