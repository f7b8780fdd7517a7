"""Analytic scalar fields with exact directional derivatives along lines.

A field is a smooth function R^n -> R from a small closed-form family
(polynomials with rational coefficients, Gaussians, radial powers,
separable sinusoids).  Every field can evaluate itself exactly at a point,
restrict itself to a line s |-> f(x + s*h) and differentiate that
restriction to high order, and rasterize itself onto a regular grid.
Polynomial fields do all scalar work in exact rational arithmetic
(`fractions.Fraction`), so finite-difference identities built on top of
them can be checked to machine precision.  Grid-scale work uses float64
vectorized paths.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .exceptions import ConfigError, DomainError, UnsupportedOrderError

__all__ = [
    "AnalyticField",
    "PolynomialField",
    "GaussianField",
    "PowerField",
    "SinusoidField",
    "GridSpec",
    "SampledField",
    "evaluate",
    "evaluate_batch",
    "directional_derivative",
    "sample",
    "gradient_magnitude_field",
    "default_directions",
    "parse_field",
    "scan_corpus",
]

# Highest derivative order any field in the family is asked to produce.
# Orders up to 6 are exercised routinely; the cap only guards against
# runaway arguments.
MAX_DERIVATIVE_ORDER = 24


def _as_point(x, dim: int) -> np.ndarray:
    pt = np.atleast_1d(np.asarray(x, dtype=float))
    if pt.shape != (dim,):
        raise ValueError(f"expected a point of dimension {dim}, got shape {pt.shape}")
    return pt


def _falling(a, k: int):
    """Falling factorial a * (a-1) * ... * (a-k+1); works for Fraction and float."""
    out = a ** 0 if isinstance(a, Fraction) else 1.0
    for j in range(k):
        out = out * (a - j)
    return out


@lru_cache(maxsize=None)
def _faa_coefficient(k: int, i: int) -> int:
    """Multiplicity of F^(k-i)(w) * (w')^(k-2i) * (w'')^i in d^k/ds^k F(w(s))."""
    return math.factorial(k) // (math.factorial(i) * 2 ** i * math.factorial(k - 2 * i))


def _faa_quadratic(outer, w1, w2, k: int):
    """k-th derivative of F(w(s)) when w is quadratic in s.

    Parameters
    ----------
    outer : sequence
        outer[m] must hold F^(m)(w(s)) for m up to k.  Entries may be
        scalars or arrays.
    w1, w2 :
        First and second derivative of w at s (w''' and beyond vanish).
    k : int
        Derivative order, k >= 0.
    """
    total = None
    for i in range(k // 2 + 1):
        term = _faa_coefficient(k, i) * outer[k - i] * w1 ** (k - 2 * i) * w2 ** i
        total = term if total is None else total + term
    return total


# ---------------------------------------------------------------------------
# line restrictions


class _RationalLine:
    """Restriction of a rational polynomial to a line, as exact coefficients."""

    def __init__(self, coeffs: list[Fraction]):
        self.coeffs = coeffs  # coeffs[k] multiplies s^k

    def deriv_fraction(self, order: int, t: Fraction) -> Fraction:
        total = Fraction(0)
        for k in range(order, len(self.coeffs)):
            c = self.coeffs[k] * _falling(Fraction(k), order)
            total += c * t ** (k - order)
        return total

    def deriv(self, order: int, t: float) -> float:
        return float(self.deriv_fraction(order, Fraction(t)))

    def deriv_array(self, order: int, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        cs = [float(self.coeffs[k] * _falling(Fraction(k), order))
              for k in range(order, len(self.coeffs))]
        out = np.zeros_like(ts)
        for c in reversed(cs):
            out = out * ts + c
        return out


class _GaussianLine:
    """Restriction of exp(-a |x|^2) to a line."""

    def __init__(self, a: float, x2: float, xh: float, h2: float):
        self.a = a
        self.x2 = x2
        self.xh = xh
        self.h2 = h2

    def _parts(self, ts):
        w = -self.a * (self.x2 + 2.0 * self.xh * ts + self.h2 * ts * ts)
        w1 = -2.0 * self.a * (self.xh + self.h2 * ts)
        w2 = -2.0 * self.a * self.h2
        return w, w1, w2

    def deriv(self, order: int, t: float) -> float:
        w, w1, w2 = self._parts(t)
        g = math.exp(w)
        return float(_faa_quadratic([g] * (order + 1), w1, w2, order))

    def deriv_array(self, order: int, ts: np.ndarray) -> np.ndarray:
        w, w1, w2 = self._parts(np.asarray(ts, dtype=float))
        g = np.exp(w)
        return _faa_quadratic([g] * (order + 1), w1, w2, order)


class _PowerLine:
    """Restriction of |x|^alpha to a line (radius squared is quadratic in s)."""

    def __init__(self, beta: float, x2: float, xh: float, h2: float, r2_min: float):
        self.beta = beta  # alpha / 2, exponent applied to |x|^2
        self.x2 = x2
        self.xh = xh
        self.h2 = h2
        self.r2_min = r2_min

    def _radius2(self, ts):
        return self.x2 + 2.0 * self.xh * ts + self.h2 * ts * ts

    def _eval(self, ts, order: int):
        r2 = self._radius2(ts)
        r1 = 2.0 * (self.xh + self.h2 * ts)
        rdd = 2.0 * self.h2
        outer = [_falling(self.beta, m) * r2 ** (self.beta - m) for m in range(order + 1)]
        return _faa_quadratic(outer, r1, rdd, order)

    def deriv(self, order: int, t: float) -> float:
        if self._radius2(t) < self.r2_min:
            raise DomainError("line point falls inside the excluded ball at the origin")
        return float(self._eval(float(t), order))

    def deriv_array(self, order: int, ts: np.ndarray) -> np.ndarray:
        return self._eval(np.asarray(ts, dtype=float), order)


class _SinusoidLine:
    """Restriction of prod_i sin(w_i x_i) to a line."""

    def __init__(self, phases: np.ndarray, rates: np.ndarray):
        self.phases = phases  # w_i * x_i
        self.rates = rates    # w_i * h_i

    def _factor_derivs(self, i: int, order: int, ts):
        theta = self.phases[i] + self.rates[i] * ts
        return [self.rates[i] ** k * np.sin(theta + 0.5 * k * math.pi)
                for k in range(order + 1)]

    def deriv_array(self, order: int, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        derivs = self._factor_derivs(0, order, ts)
        for i in range(1, len(self.phases)):
            nxt = self._factor_derivs(i, order, ts)
            derivs = [sum(math.comb(k, j) * derivs[j] * nxt[k - j] for j in range(k + 1))
                      for k in range(order + 1)]
        return derivs[order] + np.zeros_like(ts)

    def deriv(self, order: int, t: float) -> float:
        return float(self.deriv_array(order, np.asarray(float(t))))


# ---------------------------------------------------------------------------
# field family


class AnalyticField:
    """Base class for the closed-form field family.

    Subclasses provide `dim`, exact point evaluation, vectorized batch
    evaluation, line restrictions, and vectorized directional derivatives.
    """

    dim: int
    max_order: int = MAX_DERIVATIVE_ORDER

    def value(self, x) -> float:
        raise NotImplementedError

    def value_batch(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def line_restriction(self, x, h):
        raise NotImplementedError

    def directional_batch(self, pts: np.ndarray, e: np.ndarray, order: int) -> np.ndarray:
        raise NotImplementedError

    def contains(self, x) -> bool:
        _as_point(x, self.dim)
        return True

    def contains_box(self, lo, hi) -> bool:
        _as_point(lo, self.dim)
        _as_point(hi, self.dim)
        return True

    def _check_point(self, x) -> np.ndarray:
        pt = _as_point(x, self.dim)
        if not self.contains(pt):
            raise DomainError(f"point {pt.tolist()} outside the domain of {self}")
        return pt

    def _check_order(self, order: int) -> int:
        if not isinstance(order, (int, np.integer)) or order < 0:
            raise UnsupportedOrderError(f"derivative order must be a nonnegative integer, got {order!r}")
        if order > self.max_order:
            raise UnsupportedOrderError(f"order {order} exceeds supported maximum {self.max_order}")
        return int(order)


class PolynomialField(AnalyticField):
    """Multivariate polynomial with rational coefficients, exact at every step.

    Coefficients map exponent tuples to `Fraction` values; scalar
    evaluation and line restrictions stay in rational arithmetic so that
    algebraic identities hold exactly after a single final rounding.
    """

    def __init__(self, coeffs, dim: int | None = None):
        terms: dict[tuple[int, ...], Fraction] = {}
        for exps, c in (coeffs.items() if isinstance(coeffs, dict) else coeffs):
            exps = tuple(int(e) for e in exps)
            if any(e < 0 for e in exps):
                raise ConfigError("polynomial exponents must be nonnegative")
            c = Fraction(c)
            if c != 0:
                terms[exps] = terms.get(exps, Fraction(0)) + c
        terms = {e: c for e, c in terms.items() if c != 0}
        dims = {len(e) for e in terms}
        if len(dims) > 1:
            raise ConfigError("all exponent tuples must have the same length")
        if dim is None:
            if not dims:
                raise ConfigError("zero polynomial needs an explicit dimension")
            dim = dims.pop()
        elif dims and dims.pop() != dim:
            raise ConfigError("exponent tuples do not match the requested dimension")
        self.dim = int(dim)
        self.terms = tuple(sorted(terms.items(), key=lambda item: (-sum(item[0]), item[0])))

    def __eq__(self, other):
        return isinstance(other, PolynomialField) and (self.dim, self.terms) == (other.dim, other.terms)

    def __hash__(self):
        return hash((self.dim, self.terms))

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def value_fraction(self, x) -> Fraction:
        pt = [Fraction(v) for v in _as_point(x, self.dim)]
        total = Fraction(0)
        for exps, c in self.terms:
            mono = c
            for xi, ei in zip(pt, exps):
                if ei:
                    mono *= xi ** ei
            total += mono
        return total

    def value(self, x) -> float:
        return float(self.value_fraction(x))

    def value_batch(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        out = np.zeros(pts.shape[:-1])
        for exps, c in self.terms:
            mono = np.full(pts.shape[:-1], float(c))
            for i, ei in enumerate(exps):
                if ei:
                    mono = mono * pts[..., i] ** ei
            out += mono
        return out

    def line_restriction(self, x, h) -> _RationalLine:
        pt = [Fraction(v) for v in _as_point(x, self.dim)]
        hv = [Fraction(v) for v in _as_point(h, self.dim)]
        return self.line_from_fractions(pt, hv)

    def line_from_fractions(self, pt: list[Fraction], hv: list[Fraction]) -> _RationalLine:
        total = [Fraction(0)]
        for exps, c in self.terms:
            term = [c]
            for xi, hi, ei in zip(pt, hv, exps):
                for _ in range(ei):
                    # multiply by (xi + hi * s)
                    nxt = [Fraction(0)] * (len(term) + 1)
                    for k, a in enumerate(term):
                        nxt[k] += a * xi
                        nxt[k + 1] += a * hi
                    term = nxt
            if len(term) > len(total):
                total += [Fraction(0)] * (len(term) - len(total))
            for k, a in enumerate(term):
                total[k] += a
        return _RationalLine(total)

    def partial(self, beta: tuple[int, ...]) -> "PolynomialField":
        return _poly_partial(self, tuple(int(b) for b in beta))

    def directional_batch(self, pts: np.ndarray, e: np.ndarray, order: int) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        out = np.zeros(pts.shape[:-1])
        for beta in _compositions(order, self.dim):
            weight = math.factorial(order)
            for b in beta:
                weight //= math.factorial(b)
            scale = weight * float(np.prod(np.asarray(e, dtype=float) ** np.asarray(beta)))
            if scale == 0.0:
                continue
            out += scale * self.partial(beta).value_batch(pts)
        return out

    def __repr__(self):
        return f"PolynomialField({format_poly(self)!r}, dim={self.dim})"

    def __str__(self):
        return "poly:" + format_poly(self)


@lru_cache(maxsize=None)
def _poly_partial(field: PolynomialField, beta: tuple[int, ...]) -> PolynomialField:
    terms = {}
    for exps, c in field.terms:
        if any(e < b for e, b in zip(exps, beta)):
            continue
        for e, b in zip(exps, beta):
            c = c * _falling(Fraction(e), b)
        terms[tuple(e - b for e, b in zip(exps, beta))] = c
    return PolynomialField(terms, dim=field.dim)


@lru_cache(maxsize=None)
def _compositions(total: int, parts: int) -> tuple[tuple[int, ...], ...]:
    """All tuples of `parts` nonnegative integers summing to `total`."""
    if parts == 1:
        return ((total,),)
    out = []
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return tuple(out)


def format_poly(field: PolynomialField) -> str:
    if not field.terms:
        return "0"
    chunks = []
    for exps, c in field.terms:
        factors = []
        if abs(c) != 1 or not any(exps):
            factors.append(str(abs(c)))
        for i, ei in enumerate(exps):
            if ei == 1:
                factors.append(f"x{i}")
            elif ei > 1:
                factors.append(f"x{i}^{ei}")
        body = "*".join(factors)
        chunks.append(("-" if c < 0 else "+") + body)
    text = "".join(chunks)
    return text[1:] if text.startswith("+") else text


class GaussianField(AnalyticField):
    """Radial Gaussian exp(-a |x|^2) with a > 0."""

    def __init__(self, a: float, dim: int = 1):
        if not a > 0:
            raise ConfigError("gaussian width parameter must be positive")
        self.a = float(a)
        self.dim = int(dim)

    def value(self, x) -> float:
        pt = _as_point(x, self.dim)
        return math.exp(-self.a * float(np.dot(pt, pt)))

    def value_batch(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        return np.exp(-self.a * np.sum(pts * pts, axis=-1))

    def line_restriction(self, x, h) -> _GaussianLine:
        pt = _as_point(x, self.dim)
        hv = _as_point(h, self.dim)
        return _GaussianLine(self.a, float(np.dot(pt, pt)), float(np.dot(pt, hv)),
                             float(np.dot(hv, hv)))

    def directional_batch(self, pts: np.ndarray, e: np.ndarray, order: int) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        e = np.asarray(e, dtype=float)
        g = self.value_batch(pts)
        w1 = -2.0 * self.a * (pts @ e)
        w2 = -2.0 * self.a * float(e @ e)
        return _faa_quadratic([g] * (order + 1), w1, w2, order)

    def __str__(self):
        return f"gauss:a={self.a:g}"

    __repr__ = __str__


class PowerField(AnalyticField):
    """Radial power |x|^alpha on R^n minus a small ball at the origin.

    The ball of radius `exclusion` around the origin is outside the
    domain, which keeps all derivative orders bounded on the remainder.
    """

    def __init__(self, alpha: float, dim: int = 1, exclusion: float = 0.05):
        self.alpha = float(alpha)
        self.dim = int(dim)
        self.exclusion = float(exclusion)
        if self.exclusion <= 0:
            raise ConfigError("exclusion radius must be positive")

    def contains(self, x) -> bool:
        pt = _as_point(x, self.dim)
        return float(np.dot(pt, pt)) >= self.exclusion ** 2

    def contains_box(self, lo, hi) -> bool:
        lo = _as_point(lo, self.dim)
        hi = _as_point(hi, self.dim)
        nearest = np.clip(0.0, lo, hi)
        return float(np.dot(nearest, nearest)) >= self.exclusion ** 2

    def value(self, x) -> float:
        pt = self._check_point(x)
        return float(np.dot(pt, pt)) ** (self.alpha / 2.0)

    def value_batch(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        r2 = np.sum(pts * pts, axis=-1)
        if np.any(r2 < self.exclusion ** 2):
            raise DomainError("points fall inside the excluded ball at the origin")
        return r2 ** (self.alpha / 2.0)

    def line_restriction(self, x, h) -> _PowerLine:
        pt = self._check_point(x)
        hv = _as_point(h, self.dim)
        return _PowerLine(self.alpha / 2.0, float(np.dot(pt, pt)), float(np.dot(pt, hv)),
                          float(np.dot(hv, hv)), self.exclusion ** 2)

    def segment_in_domain(self, x, h, s0: float, s1: float) -> bool:
        """Whether x + s h stays outside the excluded ball for all s in [s0, s1].

        The squared radius along the line is quadratic in s, so the
        minimum over the segment is found exactly.
        """
        pt = _as_point(x, self.dim)
        hv = _as_point(h, self.dim)
        x2 = float(np.dot(pt, pt))
        xh = float(np.dot(pt, hv))
        h2 = float(np.dot(hv, hv))
        candidates = [s0, s1]
        if h2 > 0.0:
            candidates.append(min(max(-xh / h2, s0), s1))
        r2_min = min(x2 + 2.0 * xh * s + h2 * s * s for s in candidates)
        return r2_min >= self.exclusion ** 2

    def directional_batch(self, pts: np.ndarray, e: np.ndarray, order: int) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        e = np.asarray(e, dtype=float)
        r2 = np.sum(pts * pts, axis=-1)
        if np.any(r2 < self.exclusion ** 2):
            raise DomainError("points fall inside the excluded ball at the origin")
        beta = self.alpha / 2.0
        outer = [_falling(beta, m) * r2 ** (beta - m) for m in range(order + 1)]
        r1 = 2.0 * (pts @ e)
        rdd = 2.0 * float(e @ e)
        return _faa_quadratic(outer, r1, rdd, order)

    def __str__(self):
        return f"pow:alpha={self.alpha:g}"

    __repr__ = __str__


class SinusoidField(AnalyticField):
    """Separable product prod_i sin(w_i x_i)."""

    def __init__(self, omegas):
        self.omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
        if self.omegas.ndim != 1 or self.omegas.size == 0:
            raise ConfigError("sinusoid needs a nonempty vector of frequencies")
        self.dim = int(self.omegas.size)

    def value(self, x) -> float:
        pt = _as_point(x, self.dim)
        return float(np.prod(np.sin(self.omegas * pt)))

    def value_batch(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        return np.prod(np.sin(self.omegas * pts), axis=-1)

    def line_restriction(self, x, h) -> _SinusoidLine:
        pt = _as_point(x, self.dim)
        hv = _as_point(h, self.dim)
        return _SinusoidLine(self.omegas * pt, self.omegas * hv)

    def directional_batch(self, pts: np.ndarray, e: np.ndarray, order: int) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        e = np.asarray(e, dtype=float)
        line = _SinusoidLine((self.omegas * pts).T, self.omegas * e)
        return line.deriv_array(order, np.zeros(pts.shape[:-1]))

    def __str__(self):
        w = ",".join(f"{v:g}" for v in self.omegas)
        return f"sin:w={w}"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# grids and sampled fields


@dataclass(frozen=True)
class GridSpec:
    """Regular tensor grid on a box, node i_k at lo_k + i_k * spacing_k."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]
    points: tuple[int, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lo))
        hi = tuple(float(v) for v in np.atleast_1d(self.hi))
        pts = tuple(int(v) for v in np.atleast_1d(self.points))
        if not (len(lo) == len(hi) == len(pts)):
            raise ConfigError("grid lo/hi/points must have matching lengths")
        if any(h <= l for l, h in zip(lo, hi)):
            raise ConfigError("grid box must have positive extent on every axis")
        if any(p < 2 for p in pts):
            raise ConfigError("grids need at least two points per axis")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return len(self.points)

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple((h - l) / (p - 1) for l, h, p in zip(self.lo, self.hi, self.points))

    @property
    def extent(self) -> tuple[float, ...]:
        return tuple(h - l for l, h in zip(self.lo, self.hi))

    @cached_property
    def axes(self) -> tuple[np.ndarray, ...]:
        return tuple(np.linspace(l, h, p) for l, h, p in zip(self.lo, self.hi, self.points))

    @cached_property
    def flat_points(self) -> np.ndarray:
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([g.ravel() for g in mesh], axis=-1)

    @cached_property
    def trapezoid_weights(self) -> np.ndarray:
        out = np.ones(self.points)
        for k, (sp, p) in enumerate(zip(self.spacing, self.points)):
            w = np.full(p, sp)
            w[0] = w[-1] = 0.5 * sp
            shape = [1] * self.dim
            shape[k] = p
            out = out * w.reshape(shape)
        return out

    @classmethod
    def cube(cls, lo: float, hi: float, points: int, dim: int) -> "GridSpec":
        return cls((lo,) * dim, (hi,) * dim, (points,) * dim)


@dataclass
class SampledField:
    """Field values on a `GridSpec`, lexicographic in the grid axes.

    `valid_margin` marks how many boundary layers per axis carry values
    contaminated by zero padding (after convolution); `None` means every
    node is valid.
    """

    grid: GridSpec
    values: np.ndarray
    valid_margin: tuple[int, ...] | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.points:
            raise ConfigError(f"values shape {self.values.shape} does not match grid {self.grid.points}")
        if not np.all(np.isfinite(self.values)):
            raise ConfigError("sampled fields must be finite everywhere")
        if self.valid_margin is not None:
            self.valid_margin = tuple(int(m) for m in self.valid_margin)
            if len(self.valid_margin) != self.grid.dim:
                raise ConfigError("valid_margin must have one entry per axis")
            if any(2 * m >= p for m, p in zip(self.valid_margin, self.grid.points)):
                raise ConfigError("valid interior is empty after erosion")
        self._interpolators = {}

    def interior_slices(self) -> tuple[slice, ...]:
        if self.valid_margin is None:
            return tuple(slice(None) for _ in self.grid.points)
        return tuple(slice(m, p - m) for m, p in zip(self.valid_margin, self.grid.points))

    def at(self, pts, method: str = "linear") -> np.ndarray:
        """Interpolated read-back at arbitrary points inside the grid box."""
        if method not in self._interpolators:
            self._interpolators[method] = RegularGridInterpolator(
                self.grid.axes, self.values, method=method, bounds_error=True)
        pts = np.asarray(pts, dtype=float)
        return self._interpolators[method](pts)


# ---------------------------------------------------------------------------
# module-level operations


def evaluate(f: AnalyticField, x) -> float:
    """Exact value of `f` at the point `x` (domain checked)."""
    f._check_point(x)
    return f.value(x)


def evaluate_batch(f: AnalyticField, pts: np.ndarray) -> np.ndarray:
    """Vectorized float evaluation at an array of points, shape (..., dim)."""
    return f.value_batch(np.asarray(pts, dtype=float))


def directional_derivative(f: AnalyticField, x, h, order: int, t: float = 0.0) -> float:
    """Order-th derivative of s |-> f(x + s h) at s = t.

    Exact rational arithmetic for polynomial fields; closed-form float
    evaluation otherwise.  Raises `DomainError` if x + t h leaves the
    domain and `UnsupportedOrderError` for invalid orders.
    """
    order = f._check_order(order)
    x = _as_point(x, f.dim)
    h = _as_point(h, f.dim)
    f._check_point(x + t * h)
    line = f.line_restriction(x, h)
    return line.deriv(order, t)


def sample(f: AnalyticField, grid: GridSpec, transform=None) -> SampledField:
    """Rasterize `f` on `grid` node by node via the exact scalar path.

    Read-back at a node reproduces `evaluate` bit for bit.  `transform`
    is an optional per-value map (e.g. abs) applied after evaluation.
    """
    if grid.dim != f.dim:
        raise ConfigError(f"grid dimension {grid.dim} does not match field dimension {f.dim}")
    if not f.contains_box(grid.lo, grid.hi):
        raise DomainError(f"grid box {grid.lo}..{grid.hi} is not inside the domain of {f}")
    flat = grid.flat_points
    vals = np.empty(len(flat))
    for i in range(len(flat)):
        vals[i] = f.value(flat[i])
    if transform is not None:
        for i in range(len(vals)):
            vals[i] = float(transform(vals[i]))
    return SampledField(grid, vals.reshape(grid.points))


def default_directions(dim: int) -> np.ndarray:
    """Finite unit-direction set used to probe m-th directional derivatives.

    One direction suffices on the line; in the plane 64 equispaced angles
    cover a half-turn; in 3-space the axes plus face and body diagonals
    are used; higher dimensions fall back to axes plus the main diagonal.
    """
    if dim == 1:
        return np.array([[1.0]])
    if dim == 2:
        angles = np.arange(64) * (math.pi / 64.0)
        return np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    if dim == 3:
        raw = [(1, 0, 0), (0, 1, 0), (0, 0, 1),
               (1, 1, 0), (1, -1, 0), (1, 0, 1), (1, 0, -1), (0, 1, 1), (0, 1, -1),
               (1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1)]
    else:
        raw = [tuple(1 if i == k else 0 for i in range(dim)) for k in range(dim)]
        raw.append((1,) * dim)
    arr = np.asarray(raw, dtype=float)
    return arr / np.linalg.norm(arr, axis=1, keepdims=True)


def gradient_magnitude_field(f: AnalyticField, grid: GridSpec, order: int = 1,
                             directions: np.ndarray | None = None) -> SampledField:
    """Pointwise magnitude of the order-th derivative on a grid.

    The magnitude is the maximum of |d^order/ds^order f(x + s e)| at s=0
    over the finite unit-direction set `directions` (defaults to
    `default_directions`).  Returns a nonnegative `SampledField`.
    """
    order = f._check_order(order)
    if order < 1:
        raise UnsupportedOrderError("gradient magnitude needs order >= 1")
    if grid.dim != f.dim:
        raise ConfigError(f"grid dimension {grid.dim} does not match field dimension {f.dim}")
    if not f.contains_box(grid.lo, grid.hi):
        raise DomainError(f"grid box {grid.lo}..{grid.hi} is not inside the domain of {f}")
    if directions is None:
        directions = default_directions(grid.dim)
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    if directions.size == 0:
        raise ConfigError("direction set must be nonempty")
    if directions.shape[1] != grid.dim:
        raise ConfigError("directions must match the grid dimension")
    norms = np.linalg.norm(directions, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise ConfigError("directions must be unit vectors")
    flat = grid.flat_points
    best = np.zeros(len(flat))
    for e in directions:
        np.maximum(best, np.abs(f.directional_batch(flat, e, order)), out=best)
    return SampledField(grid, best.reshape(grid.points))


# ---------------------------------------------------------------------------
# the string grammar and the standard corpus

_NUM_RE = r"\d+(?:\.\d+)?(?:/\d+)?"
_FACTOR_RE = re.compile(rf"^(?:(?P<num>{_NUM_RE})|x(?P<var>\d+)(?:\^(?P<exp>\d+))?)$")


def _parse_poly(expr: str, dim: int | None) -> PolynomialField:
    text = expr.replace(" ", "")
    if not text:
        raise ConfigError("empty polynomial expression")
    pieces = re.split(r"(?=[+-])", text)
    terms = []
    max_var = -1
    for piece in pieces:
        if not piece:
            continue
        sign = Fraction(1)
        if piece[0] in "+-":
            sign = Fraction(-1) if piece[0] == "-" else Fraction(1)
            piece = piece[1:]
        if not piece:
            raise ConfigError(f"dangling sign in polynomial expression {expr!r}")
        coeff = sign
        powers: dict[int, int] = {}
        for factor in piece.split("*"):
            mt = _FACTOR_RE.match(factor)
            if mt is None:
                raise ConfigError(f"cannot parse polynomial factor {factor!r} in {expr!r}")
            if mt.group("num") is not None:
                coeff *= Fraction(mt.group("num"))
            else:
                idx = int(mt.group("var"))
                powers[idx] = powers.get(idx, 0) + int(mt.group("exp") or 1)
                max_var = max(max_var, idx)
        terms.append((powers, coeff))
    if dim is None:
        dim = max_var + 1 if max_var >= 0 else 1
    if max_var >= dim:
        raise ConfigError(f"variable x{max_var} exceeds dimension {dim}")
    coeffs: dict[tuple[int, ...], Fraction] = {}
    for powers, coeff in terms:
        exps = tuple(powers.get(i, 0) for i in range(dim))
        coeffs[exps] = coeffs.get(exps, Fraction(0)) + coeff
    return PolynomialField(coeffs, dim=dim)


def parse_field(text: str, dim: int | None = None) -> AnalyticField:
    """Build a field from its string form.

    Grammar: ``poly:<expr>`` with terms like ``1+2*x0^2*x1``,
    ``gauss:a=<float>``, ``pow:alpha=<float>``, ``sin:w=<w0>,<w1>,...``.
    `dim` fixes the ambient dimension where the string leaves it open.
    """
    if ":" not in text:
        raise ConfigError(f"field string {text!r} lacks a 'kind:' prefix")
    kind, _, body = text.partition(":")
    kind = kind.strip().lower()
    body = body.strip()
    try:
        if kind == "poly":
            return _parse_poly(body, dim)
        if kind == "gauss":
            key, _, val = body.partition("=")
            if key.strip() != "a":
                raise ConfigError(f"gauss fields take a=<float>, got {body!r}")
            return GaussianField(float(val), dim=dim or 1)
        if kind == "pow":
            key, _, val = body.partition("=")
            if key.strip() != "alpha":
                raise ConfigError(f"pow fields take alpha=<float>, got {body!r}")
            return PowerField(float(val), dim=dim or 1)
        if kind == "sin":
            key, _, val = body.partition("=")
            if key.strip() != "w":
                raise ConfigError(f"sin fields take w=<w0>,<w1>,..., got {body!r}")
            omegas = [float(v) for v in val.split(",") if v.strip()]
            if dim is not None and len(omegas) != dim:
                raise ConfigError(f"sin field has {len(omegas)} frequencies but dimension {dim}")
            return SinusoidField(omegas)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"cannot parse field string {text!r}: {exc}") from exc
    raise ConfigError(f"unknown field kind {kind!r} (expected poly/gauss/pow/sin)")


def random_polynomial(rng: np.random.Generator, dim: int, max_degree: int = 6,
                      max_terms: int = 6,
                      exact_degree: int | None = None) -> PolynomialField:
    """Random polynomial with small rational coefficients, for stress draws.

    With `exact_degree` set, the total degree is exactly that value (a
    top-degree term is forced in).
    """
    top = exact_degree if exact_degree is not None else max_degree
    terms: dict[tuple[int, ...], Fraction] = {}
    for _ in range(max_terms):
        exps = tuple(int(v) for v in rng.integers(0, top + 1, dim))
        if sum(exps) > top:
            continue
        num = int(rng.integers(-2, 3))
        den = int(rng.choice((1, 2, 4)))
        if num:
            terms[exps] = terms.get(exps, Fraction(0)) + Fraction(num, den)
    terms = {e: c for e, c in terms.items() if c != 0}
    if exact_degree is not None and not any(sum(e) == exact_degree for e in terms):
        lead = [0] * dim
        for _ in range(exact_degree):
            lead[int(rng.integers(0, dim))] += 1
        terms[tuple(lead)] = terms.get(tuple(lead), Fraction(0)) + Fraction(1, 2)
    if not terms:
        terms[(0,) * dim] = Fraction(1)
    return PolynomialField(terms, dim=dim)


def scan_corpus(dim: int) -> list[AnalyticField]:
    """Smooth corpus members defined on all of [-1, 1]^dim.

    The radial-power member is excluded here because its domain omits a
    ball at the origin; scan it on an origin-avoiding box instead.
    """
    if dim == 1:
        return [
            parse_field("poly:x0^3-x0"),
            parse_field("poly:0.5*x0^4-x0^2+x0"),
            parse_field("gauss:a=1", dim=1),
            parse_field("sin:w=3"),
        ]
    if dim == 2:
        return [
            parse_field("poly:x0^3+x0*x1^2-x1"),
            parse_field("poly:x0^2*x1-0.5*x1^2"),
            parse_field("gauss:a=1", dim=2),
            parse_field("sin:w=3,2"),
        ]
    if dim == 3:
        return [
            parse_field("poly:x0^2*x1+x2^3-x0*x2"),
            parse_field("gauss:a=1", dim=3),
            parse_field("sin:w=2,1,1"),
        ]
    raise ConfigError(f"no standard corpus for dimension {dim}")
