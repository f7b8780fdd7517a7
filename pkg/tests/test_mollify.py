"""Mollifier kernels, discrete convolution, and norm inequalities."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sobolev_pointwise import (
    ConfigError,
    GridSpec,
    Mollifier,
    SampledField,
    SinusoidField,
    convolve,
    default_epsilons,
    lp_norm,
    mollified_coefficient,
    sample,
    young_check,
)


def _compact_field(grid, rng, margin_cells):
    """A nonnegative field vanishing on a boundary layer."""
    values = rng.uniform(0.0, 1.0, size=grid.points)
    mask = np.ones(grid.points, dtype=bool)
    interior = tuple(slice(m, n - m) for m, n in zip(margin_cells, grid.points))
    mask[interior] = False
    values[mask] = 0.0
    return SampledField(grid, values)


class TestMollifier:
    def test_taps_have_unit_mass(self, grid_1d):
        for profile in ("bump", "gauss"):
            phi = Mollifier(0.1, 1, profile=profile)
            assert phi.taps(grid_1d.spacing).sum() == pytest.approx(1.0, rel=0,
                                                                    abs=1e-12)

    def test_taps_are_symmetric(self, grid_1d):
        taps = Mollifier(0.15, 1).taps(grid_1d.spacing)
        np.testing.assert_allclose(taps, taps[::-1], rtol=0, atol=0)

    def test_two_dimensional_taps_are_a_product_shape(self, grid_2d):
        taps = Mollifier(0.2, 2).taps(grid_2d.spacing)
        assert taps.ndim == 2
        assert taps.shape[0] == taps.shape[1]
        assert taps.sum() == pytest.approx(1.0, abs=1e-12)

    def test_support_radius(self):
        assert Mollifier(0.25, 1).support_radius == 0.25
        assert Mollifier(0.25, 1, profile="gauss").support_radius == pytest.approx(0.75)

    def test_under_resolved_kernel_rejected(self):
        coarse = GridSpec.cube(-1.0, 1.0, 11, 1)
        with pytest.raises(ConfigError):
            Mollifier(0.05, 1).taps(coarse.spacing)

    def test_invalid_profile(self):
        with pytest.raises(ConfigError):
            Mollifier(0.1, 1, profile="box")


class TestConvolve:
    def test_preserves_constants_in_the_interior(self, grid_1d):
        u = SampledField(grid_1d, np.ones(grid_1d.points))
        phi = Mollifier(0.1, 1)
        v = convolve(u, phi)
        inner = v.values[v.interior_slices()]
        np.testing.assert_allclose(inner, 1.0, rtol=0, atol=1e-12)

    def test_margin_grows_by_kernel_half_width(self, grid_1d):
        u = SampledField(grid_1d, np.ones(grid_1d.points))
        phi = Mollifier(0.1, 1)
        cells = phi.margin_cells(grid_1d.spacing)
        assert convolve(u, phi).valid_margin[0] == cells[0]
        prior = SampledField(grid_1d, np.ones(grid_1d.points), valid_margin=(3,))
        assert convolve(prior, phi).valid_margin[0] == 3 + cells[0]

    def test_smooths_towards_the_mean(self, grid_1d, rng):
        u = SampledField(grid_1d, rng.uniform(0.0, 1.0, size=grid_1d.points))
        v = convolve(u, Mollifier(0.2, 1))
        inner = v.interior_slices()
        assert v.values[inner].std() < u.values[inner].std()

    def test_linear_functions_are_reproduced(self, grid_1d):
        u = SampledField(grid_1d, 2.0 * grid_1d.axes[0] + 0.5)
        v = convolve(u, Mollifier(0.1, 1))
        inner = v.interior_slices()
        np.testing.assert_allclose(v.values[inner], u.values[inner],
                                   rtol=1e-12, atol=1e-12)

    def test_mollified_coefficient_stays_nonnegative(self, grid_2d, rng):
        a = SampledField(grid_2d, rng.uniform(0.0, 2.0, size=grid_2d.points))
        b = mollified_coefficient(a, Mollifier(0.2, 2))
        assert np.all(b.values >= -1e-15)


class TestLpNorm:
    def test_constant_field(self, grid_1d):
        u = SampledField(grid_1d, np.full(grid_1d.points, 2.0))
        assert lp_norm(u, 1) == pytest.approx(4.0, rel=1e-12)
        assert lp_norm(u, 2) == pytest.approx(2.0 * math.sqrt(2.0), rel=1e-12)
        assert lp_norm(u, math.inf) == 2.0

    def test_scaling(self, grid_1d, rng):
        u = SampledField(grid_1d, rng.uniform(0.0, 1.0, size=grid_1d.points))
        v = SampledField(grid_1d, 3.0 * u.values)
        for p in (1.0, 1.5, 2.0, 4.0, math.inf):
            assert lp_norm(v, p) == pytest.approx(3.0 * lp_norm(u, p), rel=1e-12)

    def test_quasi_norm_exponents_are_allowed(self, grid_1d, rng):
        # p in (0, 1) appears in the quasinorm bound and must work
        u = SampledField(grid_1d, rng.uniform(0.0, 1.0, size=grid_1d.points))
        assert lp_norm(u, 0.5) > 0

    def test_rejects_bad_exponent(self, grid_1d):
        u = SampledField(grid_1d, np.zeros(grid_1d.points))
        with pytest.raises(ValueError):
            lp_norm(u, 0.0)


class TestYoung:
    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 4.0, math.inf])
    def test_random_compact_fields(self, p, grid_1d, rng):
        phi = Mollifier(0.1, 1)
        cells = phi.margin_cells(grid_1d.spacing)
        u = _compact_field(grid_1d, rng, tuple(2 * c for c in cells))
        report = young_check(u, phi, p)
        assert report.passed
        assert report.lhs <= report.rhs * (1 + 1e-6)

    def test_two_dimensional_case(self, grid_2d, rng):
        phi = Mollifier(0.25, 2)
        cells = phi.margin_cells(grid_2d.spacing)
        u = _compact_field(grid_2d, rng, tuple(2 * c for c in cells))
        report = young_check(u, phi, 2.0)
        assert report.passed

    def test_rejects_field_touching_the_boundary(self, grid_1d):
        u = SampledField(grid_1d, np.ones(grid_1d.points))
        with pytest.raises(ConfigError):
            young_check(u, Mollifier(0.1, 1), 2.0)

    def test_report_dict_round_trip(self, grid_1d, rng):
        phi = Mollifier(0.1, 1)
        cells = phi.margin_cells(grid_1d.spacing)
        u = _compact_field(grid_1d, rng, tuple(2 * c for c in cells))
        d = young_check(u, phi, 1.0).to_dict()
        assert set(d) == {"p", "lhs", "rhs", "passed"}

    @settings(max_examples=20, deadline=None)
    @given(st.floats(1.0, 6.0), st.integers(0, 2 ** 31 - 1))
    def test_property_over_exponents_and_seeds(self, p, seed):
        grid = GridSpec.cube(-1.0, 1.0, 101, 1)
        phi = Mollifier(0.12, 1)
        cells = phi.margin_cells(grid.spacing)
        u = _compact_field(grid, np.random.default_rng(seed),
                           tuple(2 * c for c in cells))
        assert young_check(u, phi, p).passed


class TestDefaultEpsilons:
    def test_ladder_is_decreasing_and_resolved(self, grid_1d):
        eps = default_epsilons(grid_1d)
        assert all(b < a for a, b in zip(eps, eps[1:]))
        for e in eps:
            Mollifier(e, 1).taps(grid_1d.spacing)  # must not raise

    def test_smallest_is_well_inside_the_box(self, grid_2d):
        eps = default_epsilons(grid_2d)
        assert min(eps) < min(grid_2d.extent) / 4
