"""Ball and lens geometry, and the discrete maximal function."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sobolev_pointwise import (
    ConfigError,
    GaussianField,
    GridSpec,
    MaximalConfig,
    SampledField,
    ball_average,
    ball_volume,
    default_radii,
    ladder_configs,
    lens_volume,
    local_maximal_function,
    mean_maximal_gradient,
    parse_field,
    sample,
    segment_ratio_constant,
)


def _brute_ball_average(u, radius):
    """Counting-measure ball average by direct enumeration."""
    grid = u.grid
    pts = grid.flat_points
    flat = u.values.reshape(-1)
    out = np.empty_like(flat)
    for i, p in enumerate(pts):
        mask = np.linalg.norm(pts - p, axis=1) <= radius * (1 + 1e-12)
        out[i] = flat[mask].mean()
    return out.reshape(u.values.shape)


class TestBallVolume:
    def test_known_dimensions(self):
        assert ball_volume(1, 1.0) == 2.0
        assert ball_volume(2, 1.0) == pytest.approx(math.pi, rel=1e-15)
        assert ball_volume(3, 1.0) == pytest.approx(4 * math.pi / 3, rel=1e-15)

    def test_radius_scaling(self):
        for n in (1, 2, 3, 5):
            assert ball_volume(n, 2.0) == pytest.approx(2 ** n * ball_volume(n, 1.0),
                                                        rel=1e-14)

    def test_zero_radius_and_negative_radius(self):
        assert ball_volume(2, 0.0) == 0.0
        with pytest.raises(ValueError):
            ball_volume(2, -1.0)


class TestLensVolume:
    def test_unit_overlap_values(self):
        assert lens_volume(1, 1.0, 1.0) == pytest.approx(1.0, rel=1e-14)
        want2 = 2 * math.pi / 3 - math.sqrt(3) / 2
        assert lens_volume(2, 1.0, 1.0) == pytest.approx(want2, rel=1e-13)
        assert lens_volume(3, 1.0, 1.0) == pytest.approx(5 * math.pi / 12, rel=1e-13)

    def test_zero_distance_gives_ball(self):
        for n in (1, 2, 3):
            assert lens_volume(n, 0.7, 0.0) == pytest.approx(ball_volume(n, 0.7),
                                                             rel=1e-13)

    def test_disjoint_balls_give_zero(self):
        assert lens_volume(2, 1.0, 2.5) == 0.0

    def test_quadrature_matches_closed_form(self):
        for n in (2, 3):
            for r in (0.5, 1.0, 1.7):
                for d in (0.2 * r, r, 1.6 * r):
                    closed = lens_volume(n, r, d, method="closed")
                    quad = lens_volume(n, r, d, method="quadrature")
                    assert quad == pytest.approx(closed, rel=1e-8)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 4), st.floats(0.2, 2.0), st.floats(0.0, 1.8),
           st.floats(0.5, 2.0))
    def test_scale_invariance(self, n, r, frac, scale):
        d = frac * r
        big = lens_volume(n, scale * r, scale * d)
        assert big == pytest.approx(scale ** n * lens_volume(n, r, d), rel=1e-9)

    def test_monotone_in_distance(self):
        prev = None
        for d in np.linspace(0.0, 2.0, 21):
            v = lens_volume(3, 1.0, float(d))
            if prev is not None:
                assert v <= prev + 1e-14
            prev = v


class TestSegmentConstant:
    def test_line_value_is_exact(self):
        assert segment_ratio_constant(1) == 2.0

    def test_three_dimensional_value(self):
        assert segment_ratio_constant(3) == pytest.approx(3.2, abs=1e-12)

    def test_increasing_in_dimension(self):
        values = [segment_ratio_constant(n) for n in range(1, 9)]
        assert all(b > a for a, b in zip(values, values[1:]))


class TestBallAverage:
    @pytest.mark.parametrize("dim, points", [(1, 41), (2, 17), (3, 9)])
    def test_matches_brute_force(self, dim, points, rng):
        grid = GridSpec.cube(-1.0, 1.0, points, dim)
        u = SampledField(grid, rng.uniform(0.0, 2.0, size=grid.points))
        for radius in (1.5 * grid.spacing[0], 3.2 * grid.spacing[0]):
            fast = ball_average(u, radius)
            slow = _brute_ball_average(u, radius)
            np.testing.assert_allclose(fast, slow, rtol=1e-13, atol=1e-15)

    def test_constant_field_is_fixed_point(self, grid_2d):
        u = SampledField(grid_2d, np.full(grid_2d.points, 3.5))
        np.testing.assert_allclose(ball_average(u, 0.3), 3.5, rtol=0, atol=1e-13)


class TestMaximalFunction:
    def _config(self, grid, delta=0.3):
        return MaximalConfig(delta=delta, radii=default_radii(delta, grid.spacing[0]))

    def test_dominates_each_ball_average(self, grid_1d, rng):
        u = SampledField(grid_1d, rng.uniform(0.0, 1.0, size=grid_1d.points))
        config = self._config(grid_1d)
        m = local_maximal_function(u, config)
        for radius in config.radii:
            assert np.all(m.values >= ball_average(u, radius) - 1e-14)

    def test_rejects_negative_input(self, grid_1d):
        u = SampledField(grid_1d, np.linspace(-1.0, 1.0, grid_1d.points[0]))
        with pytest.raises(ValueError):
            local_maximal_function(u, self._config(grid_1d))

    def test_sublinearity(self, grid_1d, rng):
        config = self._config(grid_1d)
        a = SampledField(grid_1d, rng.uniform(0.0, 1.0, size=grid_1d.points))
        b = SampledField(grid_1d, rng.uniform(0.0, 1.0, size=grid_1d.points))
        both = SampledField(grid_1d, a.values + b.values)
        lhs = local_maximal_function(both, config).values
        rhs = (local_maximal_function(a, config).values
               + local_maximal_function(b, config).values)
        assert np.all(lhs <= rhs + 1e-12)

    def test_homogeneity(self, grid_1d, rng):
        config = self._config(grid_1d)
        u = SampledField(grid_1d, rng.uniform(0.0, 1.0, size=grid_1d.points))
        scaled = SampledField(grid_1d, 4.0 * u.values)
        np.testing.assert_allclose(local_maximal_function(scaled, config).values,
                                   4.0 * local_maximal_function(u, config).values,
                                   rtol=1e-13, atol=1e-15)

    def test_monotone_in_delta(self, grid_1d, rng):
        u = SampledField(grid_1d, rng.uniform(0.0, 1.0, size=grid_1d.points))
        configs = ladder_configs((0.1, 0.2, 0.4), grid_1d.spacing[0])
        prev = None
        for config in configs:
            cur = local_maximal_function(u, config).values
            if prev is not None:
                assert np.all(cur >= prev - 1e-14)
            prev = cur

    def test_all_radii_below_spacing_rejected(self, grid_1d):
        u = SampledField(grid_1d, np.ones(grid_1d.points))
        config = MaximalConfig(delta=0.001, radii=(0.0005, 0.001))
        with pytest.raises(ConfigError):
            local_maximal_function(u, config)


class TestLadderConfigs:
    def test_radii_are_nested(self, grid_1d):
        configs = ladder_configs((0.1, 0.2, 0.4), grid_1d.spacing[0])
        sets = [set(c.radii) for c in configs]
        for small, big in zip(sets, sets[1:]):
            assert small <= big

    def test_radii_respect_delta(self, grid_1d):
        for config in ladder_configs((0.1, 0.2, 0.4), grid_1d.spacing[0]):
            assert max(config.radii) <= config.delta * (1 + 1e-12)

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            MaximalConfig(delta=0.1, radii=(0.05, 0.02))  # not increasing
        with pytest.raises(ConfigError):
            MaximalConfig(delta=0.1, radii=(0.05, 0.2))  # beyond delta
        with pytest.raises(ConfigError):
            MaximalConfig(delta=0.1, radii=(0.05,), boundary="wrap")


class TestMeanMaximalGradient:
    def test_linear_field_gives_constant(self, grid_1d):
        f = parse_field("poly:3*x0")
        config = MaximalConfig(delta=0.3, radii=default_radii(0.3, grid_1d.spacing[0]))
        a = mean_maximal_gradient(f, grid_1d, config)
        want = segment_ratio_constant(1) * 3.0
        np.testing.assert_allclose(a.values, want, rtol=1e-13, atol=0)

    def test_gaussian_field_is_positive_and_bounded(self, grid_2d):
        f = GaussianField(1.0, dim=2)
        config = MaximalConfig(delta=0.3, radii=default_radii(0.3, grid_2d.spacing[0]))
        a = mean_maximal_gradient(f, grid_2d, config)
        grad_max = np.sqrt(2 / math.e) * np.sqrt(2)  # coarse bound on |grad|
        assert np.all(a.values > 0)
        assert np.all(a.values <= segment_ratio_constant(2) * grad_max + 1e-12)
