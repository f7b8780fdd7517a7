"""Equispaced finite differences, Lagrange interpolation, and their identities.

The central objects are the l-th forward difference with step h,

    diff(f, x, h, l) = sum_j (-1)^(l-j) C(l, j) f(x + j h),

the degree l-1 Lagrange interpolant on the nodes x + j h (j < l), and the
iterated-integral representation of the difference.  The interpolation
remainder f(y) - L(y) with h = (y - x) / l equals the forward difference
exactly; the alternating-sign sum `g_sum` equals (-1)^l times it; and the
iterated integral reproduces it to quadrature accuracy.  These identities
are what the verification suites pin down numerically.

Scalar evaluation goes through the exact rational path for polynomial
fields, so identity residuals reflect only the final float rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .exceptions import (
    ConfigError,
    DegenerateNodesError,
    DegeneratePairError,
    DomainError,
    GeometryError,
    UnsupportedOrderError,
)
from .fields import AnalyticField, PolynomialField, PowerField, _as_point, evaluate

__all__ = [
    "binomial",
    "forward_difference",
    "g_sum",
    "g_integral",
    "telescope_residual",
    "NodeFamily",
    "QuadratureRule",
    "lagrange_basis",
    "lagrange_interpolant",
    "lagrange_remainder",
    "tilde_difference",
    "taylor_remainder",
    "irwin_hall_density",
]

# Tensor-product quadrature guard: refuse rule.order ** l beyond this.
_MAX_TENSOR_NODES = 20_000_000


def binomial(l: int, j: int) -> int:
    """Exact binomial coefficient C(l, j) with 0 <= j <= l."""
    if l < 0 or j < 0 or j > l:
        raise ValueError(f"binomial needs 0 <= j <= l, got l={l}, j={j}")
    return math.comb(l, j)


def _signed_node_sum(f: AnalyticField, x, h, order: int, binom) -> float:
    """sum_j (-1)^j C(order, j) f(x + j h), evaluated node by node."""
    x = _as_point(x, f.dim)
    h = _as_point(h, f.dim)
    total = 0.0
    for j in range(order + 1):
        term = binom(order, j) * evaluate(f, x + j * h)
        total = total + term if j % 2 == 0 else total - term
    return total


def forward_difference(f: AnalyticField, x, h, order: int, *, binom=binomial) -> float:
    """l-th forward difference sum_j (-1)^(l-j) C(l, j) f(x + j h).

    Order 0 returns f(x); a zero step with order >= 1 returns 0.  The
    `binom` argument is a fault-injection hook for negative-control
    tests and must behave like `binomial` in normal use.
    """
    order = f._check_order(order)
    if order == 0:
        return evaluate(f, x)
    h = _as_point(h, f.dim)
    if not np.any(h):
        return 0.0
    signed = _signed_node_sum(f, x, h, order, binom)
    return signed if order % 2 == 0 else -signed


def g_sum(f: AnalyticField, x, h, order: int, *, binom=binomial) -> float:
    """Alternating node sum sum_j (-1)^j C(l, j) f(x + j h).

    Equals (-1)^l * forward_difference exactly (the same floats with a
    final negation).  Follows the same order-0 / zero-step conventions.
    """
    order = f._check_order(order)
    if order == 0:
        return evaluate(f, x)
    h = _as_point(h, f.dim)
    if not np.any(h):
        return 0.0
    return _signed_node_sum(f, x, h, order, binom)


def telescope_residual(f: AnalyticField, x, h, order: int, *, binom=binomial) -> float:
    """Residual of the two-term recursion tying order l-1 sums to the order l difference.

    Returns g_sum(f, x, h, l-1) - g_sum(f, x+h, h, l-1) - (-1)^l * forward_difference(f, x, h, l),
    which is zero in exact arithmetic by Pascal's rule.  Callers bound it
    by 1e-12 * (1 + |forward_difference|).
    """
    if order < 1:
        raise UnsupportedOrderError("the telescoping recursion needs order >= 1")
    x = _as_point(x, f.dim)
    h = _as_point(h, f.dim)
    lhs = g_sum(f, x, h, order - 1, binom=binom) - g_sum(f, x + h, h, order - 1, binom=binom)
    rhs = forward_difference(f, x, h, order, binom=binom)
    if order % 2 != 0:
        rhs = -rhs
    return lhs - rhs


# ---------------------------------------------------------------------------
# node families and Lagrange interpolation


@dataclass(frozen=True)
class NodeFamily:
    """Equispaced nodes base + j * step for j = 0, ..., count - 1."""

    base: tuple[float, ...]
    step: tuple[float, ...]
    count: int

    def __post_init__(self):
        base = tuple(float(v) for v in np.atleast_1d(self.base))
        step = tuple(float(v) for v in np.atleast_1d(self.step))
        if len(base) != len(step):
            raise DegenerateNodesError("node base and step must have the same dimension")
        if self.count < 1:
            raise DegenerateNodesError("a node family needs at least one node")
        if not any(step):
            raise DegenerateNodesError("node step must be nonzero")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "step", step)
        object.__setattr__(self, "count", int(self.count))

    @classmethod
    def for_remainder(cls, x, y, order: int) -> "NodeFamily":
        """Nodes for the order-th interpolation remainder at y: step exactly (y - x) / order."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if order < 1:
            raise UnsupportedOrderError("the interpolation remainder needs order >= 1")
        if x.shape != y.shape:
            raise DegeneratePairError("x and y must have the same dimension")
        if np.array_equal(x, y):
            raise DegeneratePairError("the remainder form needs distinct endpoints")
        return cls(tuple(x), tuple((y - x) / order), order)

    @property
    def dim(self) -> int:
        return len(self.base)

    def node(self, j: int) -> np.ndarray:
        return np.asarray(self.base) + j * np.asarray(self.step)

    def nodes(self) -> np.ndarray:
        return np.asarray(self.base) + np.arange(self.count)[:, None] * np.asarray(self.step)

    def line_coordinate(self, y) -> float:
        """Coordinate s with y = base + s * step; off-line points are geometry errors."""
        y = _as_point(y, self.dim)
        d = y - np.asarray(self.base)
        step = np.asarray(self.step)
        step2 = float(step @ step)
        s = float(d @ step) / step2
        residual = float(np.linalg.norm(d - s * step))
        if residual > 1e-9 * math.sqrt(step2):
            raise GeometryError(
                f"point {y.tolist()} is off the node line (residual {residual:.3e})")
        return s


def lagrange_basis(nodes: NodeFamily, j: int, y) -> float:
    """Value at y of the j-th Lagrange basis polynomial on the node family.

    y must lie on the node line; it is mapped to its line coordinate s,
    and the basis is prod_{i != j} (s - i) / (j - i) over node indices.
    """
    if not 0 <= j < nodes.count:
        raise ValueError(f"basis index must satisfy 0 <= j < {nodes.count}, got {j}")
    s = nodes.line_coordinate(y)
    out = 1.0
    for i in range(nodes.count):
        if i != j:
            out *= (s - i) / (j - i)
    return out


def _basis_fraction(count: int, j: int, s: Fraction) -> Fraction:
    out = Fraction(1)
    for i in range(count):
        if i != j:
            out *= (s - i) / (j - i)
    return out


def lagrange_interpolant(f: AnalyticField, nodes: NodeFamily, y) -> float:
    """Degree count-1 Lagrange interpolant of f on the node family, at y.

    Polynomial fields go through the exact rational path (node values,
    line coordinate, and basis weights all as fractions) with a single
    final rounding; other fields use float arithmetic.
    """
    if nodes.dim != f.dim:
        raise ConfigError("node family dimension does not match the field")
    s_float = nodes.line_coordinate(y)
    if isinstance(f, PolynomialField):
        base = [Fraction(v) for v in nodes.base]
        step = [Fraction(v) for v in nodes.step]
        dy = [Fraction(v) - b for v, b in zip(_as_point(y, f.dim), base)]
        step2 = sum(st * st for st in step)
        s = sum(d * st for d, st in zip(dy, step)) / step2
        total = Fraction(0)
        for j in range(nodes.count):
            total += f.value_fraction(nodes.node(j)) * _basis_fraction(nodes.count, j, s)
        return float(total)
    total = 0.0
    for j in range(nodes.count):
        weight = 1.0
        for i in range(nodes.count):
            if i != j:
                weight *= (s_float - i) / (j - i)
        total += evaluate(f, nodes.node(j)) * weight
    return total


def lagrange_remainder(f: AnalyticField, x, y, order: int) -> float:
    """Interpolation remainder f(y) - L(y) on the equispaced remainder nodes.

    The interpolant uses the `order` nodes x + j (y - x) / order for
    j < order, so the remainder equals forward_difference(f, x, h, order)
    with h = (y - x) / order -- computed here by the dual interpolation
    route, never by the alternating sum.
    """
    order = f._check_order(order)
    nodes = NodeFamily.for_remainder(x, y, order)
    return evaluate(f, y) - lagrange_interpolant(f, nodes, y)


def tilde_difference(f: AnalyticField, x, y, order: int) -> float:
    """Signed remainder (-1)^order * lagrange_remainder(f, x, y, order)."""
    r = lagrange_remainder(f, x, y, order)
    return r if order % 2 == 0 else -r


def taylor_remainder(f: AnalyticField, x, y, order: int) -> float:
    """f(y) minus its degree order-1 Taylor jet along the segment from x.

    The jet is sum_{j < order} (1/j!) d^j/ds^j f(x + s (y - x)) at s = 0.
    """
    order = f._check_order(order)
    if order < 1:
        raise UnsupportedOrderError("the Taylor remainder needs order >= 1")
    x = _as_point(x, f.dim)
    y = _as_point(y, f.dim)
    f._check_point(x)
    if isinstance(f, PolynomialField):
        # exact rational direction, so y is hit exactly at s = 1
        pt = [Fraction(v) for v in x]
        hv = [Fraction(b) - a for a, b in zip(pt, (Fraction(v) for v in y))]
        line = f.line_from_fractions(pt, hv)
        jet = Fraction(0)
        for j in range(order):
            jet += line.deriv_fraction(j, Fraction(0)) / math.factorial(j)
        return float(f.value_fraction(y) - jet)
    line = f.line_restriction(x, y - x)
    jet = 0.0
    for j in range(order):
        jet += line.deriv(j, 0.0) / math.factorial(j)
    return evaluate(f, y) - jet


# ---------------------------------------------------------------------------
# the iterated-integral representation


@lru_cache(maxsize=None)
def _legendre01(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights shifted to [0, 1]."""
    if order < 1:
        raise ConfigError("quadrature order must be at least 1")
    t, w = leggauss(order)
    return 0.5 * (t + 1.0), 0.5 * w


@dataclass(frozen=True)
class QuadratureRule:
    """Quadrature for the iterated-integral form of the difference.

    `gauss_tensor` integrates over the cube [0, 1]^l with a tensor
    Gauss-Legendre rule; `irwin_hall` collapses the cube integral onto
    [0, l] against the Irwin-Hall density and integrates each unit
    subinterval with its own Gauss-Legendre panel (the density has kinks
    at the integers, so a single panel would not converge fast).
    """

    kind: str
    order: int

    def __post_init__(self):
        if self.kind not in ("gauss_tensor", "irwin_hall"):
            raise ConfigError(f"unknown quadrature kind {self.kind!r}")
        if self.order < 1:
            raise ConfigError("quadrature order must be at least 1")

    @classmethod
    def gauss_tensor(cls, order: int = 8) -> "QuadratureRule":
        return cls("gauss_tensor", order)

    @classmethod
    def irwin_hall(cls, order: int = 16) -> "QuadratureRule":
        return cls("irwin_hall", order)


def irwin_hall_density(order: int, s) -> np.ndarray:
    """Density of the sum of `order` independent uniform [0, 1] draws.

    Piecewise polynomial of degree order-1 on [0, order], zero outside.
    """
    if order < 1:
        raise ValueError("the density needs order >= 1")
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    scale = 1.0 / math.factorial(order - 1)
    for k in range(order + 1):
        term = scale * ((-1) ** k) * math.comb(order, k) * (s - k) ** (order - 1)
        out = out + np.where(s >= k, term, 0.0)
    inside = (s >= 0.0) & (s <= order)
    return np.where(inside, np.maximum(out, 0.0), 0.0)


def g_integral(f: AnalyticField, x, h, order: int, rule: QuadratureRule | None = None) -> float:
    """Iterated integral of the order-th line derivative over the unit cube.

    Computes int_{[0,1]^l} d^l/ds^l f(x + s h) at s = t_1 + ... + t_l,
    which reproduces forward_difference(f, x, h, l) for smooth fields.
    The whole segment from x to x + l h must lie inside the domain.
    """
    order = f._check_order(order)
    if order < 1:
        raise UnsupportedOrderError("the integral representation needs order >= 1")
    x = _as_point(x, f.dim)
    h = _as_point(h, f.dim)
    f._check_point(x)
    if isinstance(f, PowerField) and not f.segment_in_domain(x, h, 0.0, float(order)):
        raise DomainError("integration segment crosses the excluded ball at the origin")
    if rule is None:
        rule = QuadratureRule.gauss_tensor()
    line = f.line_restriction(x, h)
    t, w = _legendre01(rule.order)
    if rule.kind == "gauss_tensor":
        if rule.order ** order > _MAX_TENSOR_NODES:
            raise ConfigError(
                f"tensor rule of order {rule.order} is too large for l={order}; "
                "use the irwin_hall rule")
        s = np.zeros(1)
        weights = np.ones(1)
        for _ in range(order):
            s = (s[:, None] + t[None, :]).ravel()
            weights = (weights[:, None] * w[None, :]).ravel()
        return float(weights @ line.deriv_array(order, s))
    total = 0.0
    for k in range(order):
        s = k + t
        total += float(np.sum(w * irwin_hall_density(order, s) * line.deriv_array(order, s)))
    return total
