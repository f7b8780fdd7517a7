"""Discrete mollification of sampled fields and Lp norm bookkeeping.

A mollifier is a nonnegative kernel of small support, sampled on the
grid lattice and normalized to unit discrete mass.  Convolving a sampled
field with it smooths the field while, by convexity, never increasing
any Lp norm of a field supported away from the boundary (the discrete
Young inequality).  The convolved values within one kernel support of
the boundary mix with zero padding and are flagged via `valid_margin`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import ndimage

from .exceptions import ConfigError
from .fields import GridSpec, SampledField

__all__ = [
    "Mollifier",
    "convolve",
    "mollified_coefficient",
    "lp_norm",
    "young_check",
    "YoungReport",
    "default_epsilons",
]

# A mollifier must be resolved by at least this many grid samples across
# its support, or the discrete kernel misrepresents the profile.
_MIN_SAMPLES_ACROSS = 8


@dataclass(frozen=True)
class Mollifier:
    """Nonnegative smoothing kernel of scale epsilon.

    Profiles: "bump" is the compactly supported exp(1 / (t^2 - 1)) bump
    with support radius epsilon; "gauss" is a Gaussian of width
    sigma * epsilon truncated at three widths.  The lattice taps are
    normalized to unit mass, so convolution preserves constants away
    from the boundary.
    """

    epsilon: float
    dim: int
    profile: str = "bump"
    sigma: float = 1.0

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ConfigError("mollifier scale must be positive")
        if self.dim < 1:
            raise ConfigError("mollifier dimension must be at least 1")
        if self.profile not in ("bump", "gauss"):
            raise ConfigError(f"unknown mollifier profile {self.profile!r}")
        if self.sigma <= 0:
            raise ConfigError("gaussian width factor must be positive")

    @property
    def support_radius(self) -> float:
        if self.profile == "bump":
            return self.epsilon
        return 3.0 * self.sigma * self.epsilon

    def _profile_values(self, r2: np.ndarray) -> np.ndarray:
        if self.profile == "bump":
            t2 = r2 / (self.epsilon * self.epsilon)
            out = np.zeros_like(t2)
            inside = t2 < 1.0
            out[inside] = np.exp(1.0 / (t2[inside] - 1.0))
            return out
        width2 = (self.sigma * self.epsilon) ** 2
        out = np.exp(-0.5 * r2 / width2)
        out[r2 > (3.0 * self.sigma * self.epsilon) ** 2] = 0.0
        return out

    def taps(self, spacing: tuple[float, ...]) -> np.ndarray:
        """Normalized kernel sampled on the grid lattice.

        Raises `ConfigError` when the support spans fewer than 8 samples
        on some axis (the kernel would be unresolved).
        """
        return _taps_cached(self, tuple(float(s) for s in spacing))

    def margin_cells(self, spacing: tuple[float, ...]) -> tuple[int, ...]:
        """Half-width of the tap stencil in cells, per axis."""
        taps = self.taps(spacing)
        return tuple((s - 1) // 2 for s in taps.shape)


@lru_cache(maxsize=None)
def _taps_cached(mollifier: Mollifier, spacing: tuple[float, ...]) -> np.ndarray:
    if len(spacing) != mollifier.dim:
        raise ConfigError("spacing length does not match the mollifier dimension")
    support = mollifier.support_radius
    cells = [int(math.floor(support / sp)) for sp in spacing]
    for c in cells:
        if 2 * c + 1 < _MIN_SAMPLES_ACROSS:
            raise ConfigError(
                f"mollifier support {support:g} spans fewer than {_MIN_SAMPLES_ACROSS} "
                "grid samples; refine the grid or enlarge epsilon")
    axes = [np.arange(-c, c + 1) * sp for c, sp in zip(cells, spacing)]
    mesh = np.meshgrid(*axes, indexing="ij")
    r2 = sum(g * g for g in mesh)
    taps = mollifier._profile_values(np.asarray(r2, dtype=float))
    total = taps.sum()
    if not total > 0:
        raise ConfigError("mollifier taps vanish on the lattice; enlarge epsilon")
    taps = taps / total
    taps.setflags(write=False)
    return taps


def convolve(u: SampledField, mollifier: Mollifier) -> SampledField:
    """Discrete convolution of a sampled field with a mollifier.

    Zero padding supplies out-of-grid values; the returned field's
    `valid_margin` grows by the kernel half-width so downstream
    consumers know which boundary layers are contaminated.
    """
    if mollifier.dim != u.grid.dim:
        raise ConfigError("mollifier dimension does not match the grid")
    taps = mollifier.taps(u.grid.spacing)
    if any(t > p for t, p in zip(taps.shape, u.grid.points)):
        raise ConfigError("mollifier support exceeds the grid box")
    out = ndimage.convolve(u.values, taps, mode="constant", cval=0.0)
    cells = mollifier.margin_cells(u.grid.spacing)
    old = u.valid_margin or (0,) * u.grid.dim
    margin = tuple(o + c for o, c in zip(old, cells))
    return SampledField(u.grid, out, valid_margin=margin)


def mollified_coefficient(a_hat: SampledField, mollifier: Mollifier) -> SampledField:
    """Mollified coefficient field: the convolution of `a_hat` with the kernel."""
    if np.any(a_hat.values < 0):
        raise ValueError("coefficient fields must be nonnegative")
    return convolve(a_hat, mollifier)


def lp_norm(u: SampledField, p: float) -> float:
    """Trapezoid-weighted Lp norm of a sampled field; p = inf gives the max norm."""
    if p == math.inf:
        return float(np.max(np.abs(u.values)))
    if not p > 0:
        raise ValueError("the exponent must be positive or inf")
    weights = u.grid.trapezoid_weights
    return float(np.sum(weights * np.abs(u.values) ** p) ** (1.0 / p))


@dataclass(frozen=True)
class YoungReport:
    """Outcome of one discrete Young inequality check."""

    p: float
    lhs: float
    rhs: float
    passed: bool

    def to_dict(self) -> dict:
        return {"p": self.p, "lhs": self.lhs, "rhs": self.rhs, "passed": self.passed}


def young_check(u: SampledField, mollifier: Mollifier, p: float,
                tolerance: float = 1e-6) -> YoungReport:
    """Check ||u * phi||_p <= ||u||_p * (1 + tolerance).

    `u` must vanish within one kernel support of the grid boundary, so
    the zero padding used by the convolution tells the truth; otherwise
    a `ConfigError` is raised.
    """
    cells = mollifier.margin_cells(u.grid.spacing)
    interior = tuple(slice(c, n - c) for c, n in zip(cells, u.grid.points))
    mask = np.ones(u.grid.points, dtype=bool)
    mask[interior] = False
    if np.any(u.values[mask] != 0.0):
        raise ConfigError(
            "the field is not supported in the interior eroded by the kernel "
            "support; enlarge the padding before checking the Young inequality")
    smoothed = convolve(u, mollifier)
    lhs = lp_norm(smoothed, p)
    rhs = lp_norm(u, p)
    return YoungReport(p=p, lhs=lhs, rhs=rhs, passed=lhs <= rhs * (1.0 + tolerance))


def default_epsilons(grid: GridSpec) -> tuple[float, ...]:
    """Mollification ladder {0.4, 0.2, 0.1} times a quarter of the box side."""
    side = min(grid.extent)
    return tuple(f * side / 4.0 for f in (0.4, 0.2, 0.1))
