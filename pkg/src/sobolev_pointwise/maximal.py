"""Ball and lens volumes, and discrete local maximal functions on grids.

The geometric constant attached to a point pair is the ratio between the
volume of a ball of radius r = |x - y| and the volume of the lens cut
out by two such balls centered at x and y.  Averaging a nonnegative grid
field over lattice balls of several radii and taking the largest average
gives a discrete local Hardy-Littlewood maximal function; scaled by the
lens ratio it yields the coefficient fields used by the inequality scans.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np
from scipy import integrate
from scipy.special import gamma

from .exceptions import ConfigError
from .fields import AnalyticField, GridSpec, SampledField, gradient_magnitude_field

__all__ = [
    "ball_volume",
    "lens_volume",
    "segment_ratio_constant",
    "LensGeometry",
    "MaximalConfig",
    "default_radii",
    "ladder_configs",
    "ball_average",
    "local_maximal_function",
    "mean_maximal_gradient",
]

# Relative slack used when testing whether a lattice offset lies inside a
# ball; keeps radius ties (radius equal to a multiple of the spacing)
# deterministic under float rounding.
_RADIUS_SLACK = 1.0 + 1e-12


def ball_volume(dim: int, radius: float) -> float:
    """Volume of the Euclidean ball of the given radius in R^dim.

    Dimension 0 is allowed (volume 1) so cross-section profiles can
    recurse down to it.
    """
    if dim < 0:
        raise ValueError("dimension must be nonnegative")
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    return math.pi ** (dim / 2.0) * radius ** dim / float(gamma(dim / 2.0 + 1.0))


def _cap_profile_volume(dim: int, radius: float, distance: float) -> float:
    """Lens volume by integrating (dim-1)-ball cross sections along the axis."""
    half = 0.5 * distance

    def profile(t: float) -> float:
        return ball_volume(dim - 1, math.sqrt(max(radius * radius - t * t, 0.0)))

    value, _ = integrate.quad(profile, half, radius, epsabs=1e-13, epsrel=1e-12, limit=200)
    return 2.0 * value


def lens_volume(dim: int, radius: float, distance: float, method: str = "auto") -> float:
    """Volume of the intersection of two balls of equal radius.

    The centers sit `distance` apart; `distance >= 2 * radius` gives 0.
    Closed forms cover dim <= 3, higher dimensions (or method
    "quadrature") integrate the cross-section profile.
    """
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if distance < 0:
        raise ValueError("center distance must be nonnegative")
    if method not in ("auto", "closed", "quadrature"):
        raise ValueError(f"unknown lens method {method!r}")
    if distance >= 2.0 * radius:
        return 0.0
    if method == "quadrature" or (method == "auto" and dim > 3):
        return _cap_profile_volume(dim, radius, distance)
    if dim == 1:
        return 2.0 * radius - distance
    if dim == 2:
        r, d = radius, distance
        return 2.0 * r * r * math.acos(d / (2.0 * r)) - 0.5 * d * math.sqrt(4.0 * r * r - d * d)
    if dim == 3:
        r, d = radius, distance
        return math.pi * (4.0 * r + d) * (2.0 * r - d) ** 2 / 12.0
    raise ValueError("closed forms exist only for dim <= 3")


@lru_cache(maxsize=None)
def segment_ratio_constant(dim: int, method: str = "auto") -> float:
    """Ratio ball(r) / lens(r, d=r): the volume factor lost by restricting
    a ball average to the lens between two points at distance r.

    Scale-free, so it is evaluated at radius 1.  Equals 2 on the line,
    about 2.5575 in the plane, and exactly 16/5 in 3-space.
    """
    return ball_volume(dim, 1.0) / lens_volume(dim, 1.0, 1.0, method=method)


@dataclass(frozen=True)
class LensGeometry:
    """Two balls of equal radius with centers a fixed distance apart."""

    dim: int
    radius: float
    distance: float

    def __post_init__(self):
        if self.dim < 1:
            raise ConfigError("dimension must be at least 1")
        if self.radius <= 0:
            raise ConfigError("radius must be positive")
        if self.distance < 0:
            raise ConfigError("center distance must be nonnegative")

    def ball_volume(self) -> float:
        return ball_volume(self.dim, self.radius)

    def lens_volume(self, method: str = "auto") -> float:
        return lens_volume(self.dim, self.radius, self.distance, method=method)


# ---------------------------------------------------------------------------
# maximal functions on grids


@dataclass(frozen=True)
class MaximalConfig:
    """Radius ladder for a local maximal function capped at scale delta.

    `radii` must increase strictly and stay in (0, delta]; `boundary`
    says how scans treat pairs near the box boundary ("reject" drops
    them, "clip" keeps them with balls clipped to the grid).
    """

    delta: float
    radii: tuple[float, ...]
    boundary: str = "reject"

    def __post_init__(self):
        if self.delta <= 0:
            raise ConfigError("delta must be positive")
        radii = tuple(float(r) for r in self.radii)
        if not radii:
            raise ConfigError("the radius ladder must be nonempty")
        if any(r <= 0 for r in radii):
            raise ConfigError("radii must be positive")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ConfigError("radii must increase strictly")
        if radii[-1] > self.delta * _RADIUS_SLACK:
            raise ConfigError("radii must not exceed delta")
        if self.boundary not in ("reject", "clip"):
            raise ConfigError(f"unknown boundary policy {self.boundary!r}")
        object.__setattr__(self, "radii", radii)


def default_radii(delta: float, spacing: float, count: int = 8) -> tuple[float, ...]:
    """Geometric radius ladder from twice the grid spacing up to delta."""
    if delta <= 0 or spacing <= 0:
        raise ConfigError("delta and spacing must be positive")
    lo = 2.0 * spacing
    if lo > delta * _RADIUS_SLACK:
        raise ConfigError(
            f"delta {delta:g} is below twice the grid spacing {spacing:g}; refine the grid")
    if count < 1:
        raise ConfigError("need at least one radius")
    ladder = np.geomspace(lo, max(delta, lo), count)
    out = []
    for r in ladder:
        if not out or r > out[-1] * (1.0 + 1e-12):
            out.append(float(r))
    return tuple(out)


def ladder_configs(deltas, spacing: float, count: int = 12,
                   boundary: str = "reject") -> list[MaximalConfig]:
    """One `MaximalConfig` per delta, with radii drawn from a shared master set.

    Because every config's radii are the master radii truncated at its
    delta, the resulting maximal functions are nested: a larger delta
    can only enlarge the maximum.  Scans rely on that monotonicity when
    a single coefficient field must dominate several pair scales.
    """
    deltas = sorted(float(d) for d in deltas)
    if not deltas:
        raise ConfigError("need at least one delta")
    if deltas[0] <= 0:
        raise ConfigError("deltas must be positive")
    master = set(default_radii(deltas[-1], spacing, count))
    for d in deltas:
        if 2.0 * spacing > d * _RADIUS_SLACK:
            raise ConfigError(f"delta {d:g} is below twice the grid spacing {spacing:g}")
        master.add(d)
    master_sorted = sorted(master)
    configs = []
    for d in deltas:
        radii = tuple(r for r in master_sorted if r <= d * _RADIUS_SLACK)
        configs.append(MaximalConfig(delta=d, radii=radii, boundary=boundary))
    return configs


def _ball_offsets(spacings: tuple[float, ...], radius: float):
    """Lattice offsets (leading axes) and last-axis half-widths inside the ball."""
    lead_spacings = spacings[:-1]
    sp_last = spacings[-1]
    r2 = radius * radius * _RADIUS_SLACK
    cells = [int(math.floor(radius * _RADIUS_SLACK / sp)) for sp in lead_spacings]
    combos = []
    for q in product(*(range(-c, c + 1) for c in cells)):
        partial = sum((qi * sp) ** 2 for qi, sp in zip(q, lead_spacings))
        if partial <= r2:
            width = int(math.floor(math.sqrt(max(r2 - partial, 0.0)) / sp_last))
            combos.append((q, width))
    return combos


def ball_average(u: SampledField, radius: float) -> np.ndarray:
    """Counting-measure average of u over lattice balls of the given radius.

    Every grid node within Euclidean distance `radius` of the center
    contributes with equal weight; near the grid boundary the ball is
    clipped to the grid.  Exact cumulative sums over contiguous runs
    keep the result deterministic.
    """
    if radius <= 0:
        raise ConfigError("ball radius must be positive")
    values = u.values
    spacings = u.grid.spacing
    nd = values.ndim
    pad_cells = [int(math.floor(radius * _RADIUS_SLACK / sp)) for sp in spacings]
    padded = np.pad(values, [(c, c) for c in pad_cells])
    ones = np.pad(np.ones_like(values), [(c, c) for c in pad_cells])
    csum = np.concatenate(
        [np.zeros(padded.shape[:-1] + (1,)), np.cumsum(padded, axis=-1)], axis=-1)
    cones = np.concatenate(
        [np.zeros(ones.shape[:-1] + (1,)), np.cumsum(ones, axis=-1)], axis=-1)
    shape = values.shape
    r_last = pad_cells[-1]
    sums = np.zeros(shape)
    counts = np.zeros(shape)
    for q, width in _ball_offsets(spacings, radius):
        lead = tuple(slice(c + qi, c + qi + n)
                     for qi, c, n in zip(q, pad_cells[:-1], shape[:-1]))
        hi = lead + (slice(r_last + width + 1, r_last + width + 1 + shape[-1]),)
        lo = lead + (slice(r_last - width, r_last - width + shape[-1]),)
        sums += csum[hi] - csum[lo]
        counts += cones[hi] - cones[lo]
    return sums / counts


def local_maximal_function(u: SampledField, config: MaximalConfig) -> SampledField:
    """Largest ball average of a nonnegative grid field over the radius ladder."""
    if np.any(u.values < 0):
        raise ValueError("the maximal function expects a nonnegative field")
    spacing_max = max(u.grid.spacing)
    if max(config.radii) < spacing_max:
        raise ConfigError(
            "every radius is below the grid spacing; the ladder resolves nothing")
    out = None
    for r in config.radii:
        avg = ball_average(u, r)
        out = avg if out is None else np.maximum(out, avg)
    margin = u.valid_margin
    if margin is not None:
        extra = [int(math.ceil(max(config.radii) / sp)) for sp in u.grid.spacing]
        margin = tuple(m + e for m, e in zip(margin, extra))
    return SampledField(u.grid, out, valid_margin=margin)


def mean_maximal_gradient(f: AnalyticField, grid: GridSpec, config: MaximalConfig,
                          order: int = 1,
                          directions: np.ndarray | None = None) -> SampledField:
    """Coefficient field C(n) * M^delta(|grad^order f|) on the grid.

    |grad^order f| is the directional magnitude from
    `gradient_magnitude_field`; C(n) is `segment_ratio_constant`.
    """
    g = gradient_magnitude_field(f, grid, order, directions)
    m_field = local_maximal_function(g, config)
    scale = segment_ratio_constant(grid.dim)
    return SampledField(grid, scale * m_field.values, valid_margin=m_field.valid_margin)
