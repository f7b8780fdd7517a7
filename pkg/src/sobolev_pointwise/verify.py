"""Inequality scans over sampled point pairs, and the exact-identity suite.

A scan draws admissible point pairs from a domain, computes a pointwise
left-hand side (an interpolation remainder or finite difference of the
field) and a right-hand side built from maximal-function coefficient
fields, and reports the ratio distribution: any pair with
lhs > (1 + slack) * rhs counts as a violation.  All randomness flows
from one seeded generator, so reports are byte-for-byte reproducible.

The identity suite exercises the algebraic layer instead: interpolation
remainder versus forward difference, the telescoping recursion, the
iterated-integral representation, difference annihilation on low-degree
polynomials, and the exact sign law.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .differences import binomial
from .exceptions import ConfigError, DegeneratePairError, EmptyScanError
from .fields import (
    AnalyticField,
    GridSpec,
    PolynomialField,
    PowerField,
    SampledField,
    evaluate_batch,
    gradient_magnitude_field,
    random_polynomial,
    sample,
    scan_corpus,
)
from .maximal import (
    MaximalConfig,
    ball_average,
    default_radii,
    ladder_configs,
    local_maximal_function,
    segment_ratio_constant,
)
from .mollify import Mollifier, convolve, default_epsilons, lp_norm

__all__ = [
    "Box",
    "Domain",
    "PairBatch",
    "PairSampler",
    "InequalityReport",
    "build_report",
    "lemma1_scan",
    "main_inequality_scan",
    "triebel_scan",
    "node_discard_check",
    "hatl_scan",
    "quasinorm_upper",
    "mollified_scan",
    "identity_suite",
    "report_schema",
]

_SAMPLE_BATCH = 8192


# ---------------------------------------------------------------------------
# domains and pair sampling


@dataclass(frozen=True)
class Box:
    """Axis-aligned closed box."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lo))
        hi = tuple(float(v) for v in np.atleast_1d(self.hi))
        if len(lo) != len(hi):
            raise ConfigError("box lo/hi must have the same length")
        if any(h <= l for l, h in zip(lo, hi)):
            raise ConfigError("box must have positive extent on every axis")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    @classmethod
    def of_grid(cls, grid: GridSpec) -> "Box":
        return cls(grid.lo, grid.hi)


@dataclass(frozen=True)
class Domain:
    """A closed box, optionally minus an open box-shaped hole."""

    outer: Box
    hole: Box | None = None

    def __post_init__(self):
        if self.hole is not None:
            if self.hole.dim != self.outer.dim:
                raise ConfigError("hole dimension must match the outer box")
            if any(hl < ol or hh > oh for ol, oh, hl, hh in
                   zip(self.outer.lo, self.outer.hi, self.hole.lo, self.hole.hi)):
                raise ConfigError("the hole must sit inside the outer box")

    @property
    def dim(self) -> int:
        return self.outer.dim

    def contains(self, pts, margin=0.0) -> np.ndarray:
        """Membership mask, shrinking the domain by `margin` on all walls.

        `margin` may be a scalar or a per-point array; the hole, when
        present, is dilated by the same margin.
        """
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        margin = np.asarray(margin, dtype=float)
        if margin.ndim == 1:
            margin = margin[:, None]
        lo = np.asarray(self.outer.lo)
        hi = np.asarray(self.outer.hi)
        ok = np.all(pts >= lo + margin, axis=1) & np.all(pts <= hi - margin, axis=1)
        if self.hole is not None:
            hlo = np.asarray(self.hole.lo)
            hhi = np.asarray(self.hole.hi)
            in_hole = (np.all(pts > hlo - margin, axis=1)
                       & np.all(pts < hhi + margin, axis=1))
            ok &= ~in_hole
        return ok

    def to_dict(self) -> dict:
        out = {"outer": {"lo": list(self.outer.lo), "hi": list(self.outer.hi)}}
        if self.hole is not None:
            out["hole"] = {"lo": list(self.hole.lo), "hi": list(self.hole.hi)}
        return out


@dataclass(frozen=True)
class PairBatch:
    """Admissible point pairs in draw order."""

    x: np.ndarray
    y: np.ndarray
    dist: np.ndarray
    attempts: int


@dataclass(frozen=True)
class PairSampler:
    """Seeded rejection sampler for point pairs in a domain.

    Pairs are kept when both endpoints lie in the domain (shrunk by a
    caller-supplied per-pair margin), the separation falls in
    [min_sep, max_sep], and `segment_samples` interior points of the
    connecting segment all belong to the domain.  Identical settings
    always reproduce the same pairs.
    """

    domain: Domain
    count: int
    seed: int
    min_sep: float
    max_sep: float
    segment_samples: int = 64
    max_attempts: int = 1_000_000

    def __post_init__(self):
        if self.count < 1:
            raise ConfigError("need at least one pair")
        if not 0 < self.min_sep <= self.max_sep:
            raise ConfigError("separations must satisfy 0 < min_sep <= max_sep")
        if self.segment_samples < 0:
            raise ConfigError("segment_samples must be nonnegative")

    def draw(self, margin_of=None) -> PairBatch:
        rng = np.random.default_rng(self.seed)
        lo = np.asarray(self.domain.outer.lo)
        hi = np.asarray(self.domain.outer.hi)
        dim = self.domain.dim
        xs, ys, ds = [], [], []
        found = 0
        attempts = 0
        while found < self.count:
            if attempts >= self.max_attempts:
                raise EmptyScanError(
                    f"only {found} of {self.count} admissible pairs found in "
                    f"{attempts} attempts; the margins or separations leave "
                    "too little room")
            x = rng.uniform(lo, hi, size=(_SAMPLE_BATCH, dim))
            y = rng.uniform(lo, hi, size=(_SAMPLE_BATCH, dim))
            attempts += _SAMPLE_BATCH
            d = np.linalg.norm(y - x, axis=1)
            keep = (d >= self.min_sep) & (d <= self.max_sep)
            x, y, d = x[keep], y[keep], d[keep]
            if x.size == 0:
                continue
            margin = np.zeros(len(d)) if margin_of is None else np.asarray(
                margin_of(d), dtype=float)
            keep = self.domain.contains(x, margin) & self.domain.contains(y, margin)
            x, y, d, margin = x[keep], y[keep], d[keep], margin[keep]
            if x.size == 0:
                continue
            if self.segment_samples > 0:
                keep = np.ones(len(d), dtype=bool)
                for t in np.linspace(0.0, 1.0, self.segment_samples + 2)[1:-1]:
                    keep &= self.domain.contains(x + t * (y - x), 0.0)
                x, y, d = x[keep], y[keep], d[keep]
            if x.size == 0:
                continue
            xs.append(x)
            ys.append(y)
            ds.append(d)
            found += len(d)
        x = np.concatenate(xs)[: self.count]
        y = np.concatenate(ys)[: self.count]
        d = np.concatenate(ds)[: self.count]
        return PairBatch(x=x, y=y, dist=d, attempts=attempts)

    def to_dict(self) -> dict:
        return {
            "domain": self.domain.to_dict(),
            "count": self.count,
            "seed": self.seed,
            "min_sep": self.min_sep,
            "max_sep": self.max_sep,
            "segment_samples": self.segment_samples,
        }


# ---------------------------------------------------------------------------
# reports


@dataclass
class InequalityReport:
    """Ratio statistics of one scan, plus the raw per-pair arrays.

    The JSON form carries parameters, counts, the maximum ratio, the
    50/90/99 percent quantiles, the slack, and one record per violating
    pair.  Per-pair arrays stay on the object for CSV export.
    """

    params: dict
    n_pairs: int
    n_violations: int
    max_ratio: float
    quantiles: dict
    slack: float
    violations: list
    x: np.ndarray = field(repr=False, default=None)
    y: np.ndarray = field(repr=False, default=None)
    lhs: np.ndarray = field(repr=False, default=None)
    rhs: np.ndarray = field(repr=False, default=None)
    ratio: np.ndarray = field(repr=False, default=None)

    @property
    def passed(self) -> bool:
        return self.n_violations == 0

    def to_dict(self) -> dict:
        return {
            "params": self.params,
            "n_pairs": self.n_pairs,
            "n_violations": self.n_violations,
            "max_ratio": self.max_ratio,
            "quantiles": self.quantiles,
            "slack": self.slack,
            "violations": self.violations,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def write_json(self, path) -> None:
        with open(path, "w") as handle:
            handle.write(self.to_json())

    def write_csv(self, path) -> None:
        dim = self.x.shape[1]
        cols = ([f"x{i}" for i in range(dim)] + [f"y{i}" for i in range(dim)]
                + ["lhs", "rhs", "ratio", "violation"])
        with open(path, "w") as handle:
            handle.write("index," + ",".join(cols) + "\n")
            for i in range(self.n_pairs):
                row = [str(i)]
                row += [repr(float(v)) for v in self.x[i]]
                row += [repr(float(v)) for v in self.y[i]]
                row += [repr(float(self.lhs[i])), repr(float(self.rhs[i])),
                        repr(float(self.ratio[i]))]
                row.append(str(int(self.ratio[i] > 1.0 + self.slack)))
                handle.write(",".join(row) + "\n")


def build_report(params: dict, x: np.ndarray, y: np.ndarray,
                 lhs: np.ndarray, rhs: np.ndarray, slack: float) -> InequalityReport:
    """Assemble a report from per-pair arrays.

    Ratios: lhs / rhs where rhs > 0; exactly 0 when both sides vanish;
    +inf when rhs vanishes but lhs does not (always a violation, and
    reported distinctly in the violation records).
    """
    if len(x) == 0:
        raise EmptyScanError("no pairs to report on")
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    ratio = np.zeros_like(lhs)
    pos = rhs > 0
    ratio[pos] = lhs[pos] / rhs[pos]
    ratio[~pos & (lhs > 0)] = math.inf
    mask = ratio > 1.0 + slack
    violations = []
    for i in np.flatnonzero(mask):
        violations.append({
            "x": [float(v) for v in x[i]],
            "y": [float(v) for v in y[i]],
            "lhs": float(lhs[i]),
            "rhs": float(rhs[i]),
            "ratio": float(ratio[i]),
        })
    # order statistics rather than interpolated quantiles: infinities from
    # vanishing right-hand sides then pass through without inf - inf noise
    q50, q90, q99 = np.quantile(ratio, [0.5, 0.9, 0.99], method="lower")
    return InequalityReport(
        params=params,
        n_pairs=int(len(x)),
        n_violations=int(mask.sum()),
        max_ratio=float(np.max(ratio)),
        quantiles={"p50": float(q50), "p90": float(q90), "p99": float(q99)},
        slack=float(slack),
        violations=violations,
        x=x, y=y, lhs=lhs, rhs=rhs, ratio=ratio,
    )


def report_schema() -> dict:
    """JSON schema of the report files written by the scans."""
    number = {"type": "number"}
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "Inequality scan report",
        "description": (
            "Ratio statistics of a pointwise inequality scan.  Ratios may be "
            "Infinity when the right-hand side vanishes; files use the "
            "non-strict JSON Infinity token for them."),
        "type": "object",
        "required": ["params", "n_pairs", "n_violations", "max_ratio",
                     "quantiles", "slack", "violations"],
        "properties": {
            "params": {"type": "object"},
            "n_pairs": {"type": "integer", "minimum": 0},
            "n_violations": {"type": "integer", "minimum": 0},
            "max_ratio": number,
            "quantiles": {
                "type": "object",
                "required": ["p50", "p90", "p99"],
                "properties": {"p50": number, "p90": number, "p99": number},
            },
            "slack": number,
            "violations": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["x", "y", "lhs", "rhs", "ratio"],
                    "properties": {
                        "x": {"type": "array", "items": number},
                        "y": {"type": "array", "items": number},
                        "lhs": number,
                        "rhs": number,
                        "ratio": number,
                    },
                },
            },
        },
    }


# ---------------------------------------------------------------------------
# coefficient ladders shared by the scans


class _CoefficientLadder:
    """Maximal coefficient fields on a delta ladder, with interpolators.

    Radii come from one master set truncated per delta, so the fields
    are monotone in delta; each pair then uses the smallest ladder delta
    at or above its separation.
    """

    def __init__(self, f: AnalyticField, grid: GridSpec, order: int,
                 deltas: np.ndarray, directions, boundary: str):
        self.grid = grid
        self.order = order
        self.boundary = boundary
        spacing = max(grid.spacing)
        self.configs = ladder_configs(deltas, spacing, boundary=boundary)
        self.deltas = np.asarray([c.delta for c in self.configs])
        g = gradient_magnitude_field(f, grid, order, directions)
        self.gradient = g
        scale = segment_ratio_constant(grid.dim)
        cache: dict[float, np.ndarray] = {}
        self.fields: list[SampledField] = []
        for cfg in self.configs:
            best = None
            for r in cfg.radii:
                if r not in cache:
                    cache[r] = ball_average(g, r)
                avg = cache[r]
                best = avg if best is None else np.maximum(best, avg)
            self.fields.append(SampledField(grid, scale * best))

    @property
    def top(self) -> SampledField:
        return self.fields[-1]

    def delta_index(self, dist: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.deltas, dist, side="left")
        if np.any(dist > self.deltas[-1] * (1.0 + 1e-9)):
            raise ConfigError("pair separation exceeds the largest ladder delta")
        return np.minimum(idx, len(self.deltas) - 1)

    def margin_of(self, dist: np.ndarray) -> np.ndarray:
        if self.boundary == "clip":
            return np.zeros_like(dist)
        return self.deltas[self.delta_index(dist)]

    def coefficient_at(self, idx: np.ndarray, pts: np.ndarray,
                       fields: list[SampledField] | None = None) -> np.ndarray:
        fields = self.fields if fields is None else fields
        out = np.empty(len(pts))
        for i, fld in enumerate(fields):
            mask = idx == i
            if np.any(mask):
                out[mask] = fld.at(pts[mask])
        return out


def _resolve_deltas(sampler: PairSampler, grid: GridSpec, config, delta_count: int):
    """Delta ladder covering the sampler's separation range."""
    if config is not None:
        if config.delta < sampler.max_sep * (1.0 - 1e-12):
            raise ConfigError(
                "the config delta must cover the largest pair separation")
        return np.asarray([config.delta]), config.boundary
    spacing = max(grid.spacing)
    lo = max(sampler.min_sep, 2.0 * spacing)
    if lo > sampler.max_sep:
        raise ConfigError("max_sep is below twice the grid spacing; refine the grid")
    deltas = np.geomspace(lo, sampler.max_sep, delta_count)
    deltas[-1] = sampler.max_sep
    keep = [deltas[0]]
    for d in deltas[1:]:
        if d > keep[-1] * (1.0 + 1e-12):
            keep.append(float(d))
    return np.asarray(keep), "reject"


def _remainder_batch(f: AnalyticField, x: np.ndarray, y: np.ndarray,
                     order: int) -> np.ndarray:
    """Vectorized interpolation remainder f(y) - L(y), the scan-side twin of
    `differences.lagrange_remainder` (same node geometry and basis route)."""
    if np.any(np.all(x == y, axis=1)):
        raise DegeneratePairError("coincident pair endpoints in remainder batch")
    h = (y - x) / order
    s = np.einsum("kn,kn->k", y - x, h) / np.einsum("kn,kn->k", h, h)
    total = np.zeros(len(x))
    for j in range(order):
        w = np.ones(len(x))
        for i in range(order):
            if i != j:
                w = w * (s - i) / (j - i)
        total += evaluate_batch(f, x + j * h) * w
    return evaluate_batch(f, y) - total


def _difference_values(values_at_nodes: list[np.ndarray], order: int) -> np.ndarray:
    """Forward difference sum_j (-1)^(order-j) C(order, j) v_j from node values."""
    total = np.zeros_like(values_at_nodes[0])
    for j, vals in enumerate(values_at_nodes):
        c = binomial(order, j) * ((-1) ** (order - j))
        total = total + c * vals
    return total


def _scan_params(name: str, f: AnalyticField, sampler: PairSampler, order: int,
                 grid: GridSpec, slack: float, extra: dict | None = None) -> dict:
    params = {
        "scan": name,
        "field": str(f),
        "dim": f.dim,
        "order": order,
        "grid": {"lo": list(grid.lo), "hi": list(grid.hi), "points": list(grid.points)},
        "sampler": sampler.to_dict(),
        "slack": slack,
    }
    if extra:
        params.update(extra)
    return params


# ---------------------------------------------------------------------------
# the scans


def main_inequality_scan(f: AnalyticField, order: int, grid: GridSpec,
                         sampler: PairSampler, config=None, *,
                         slack: float = 0.05, directions=None,
                         delta_count: int = 4) -> InequalityReport:
    """Scan |f(y) - L(y)| <= |x - y|^order * (a(x) + a(y)).

    The left side is the order-th interpolation remainder (computed by
    the interpolation route); the coefficient a is the lens-ratio-scaled
    local maximal function of |grad^order f| at the pair's ladder delta,
    read back by multilinear interpolation.
    """
    if order < 1:
        raise ConfigError("the scan needs order >= 1")
    deltas, boundary = _resolve_deltas(sampler, grid, config, delta_count)
    ladder = _CoefficientLadder(f, grid, order, deltas, directions, boundary)
    pairs = sampler.draw(ladder.margin_of)
    idx = ladder.delta_index(pairs.dist)
    lhs = np.abs(_remainder_batch(f, pairs.x, pairs.y, order))
    ax = ladder.coefficient_at(idx, pairs.x)
    ay = ladder.coefficient_at(idx, pairs.y)
    rhs = pairs.dist ** order * (ax + ay)
    name = "lemma1" if order == 1 else "main_inequality"
    params = _scan_params(name, f, sampler, order, grid, slack, {
        "deltas": [float(d) for d in ladder.deltas],
        "radii_master": [float(r) for r in ladder.configs[-1].radii],
        "boundary": boundary,
        "attempts": pairs.attempts,
        "constant": segment_ratio_constant(grid.dim),
    })
    return build_report(params, pairs.x, pairs.y, lhs, rhs, slack)


def lemma1_scan(f: AnalyticField, grid: GridSpec, sampler: PairSampler,
                config=None, *, slack: float = 0.05, directions=None,
                delta_count: int = 4) -> InequalityReport:
    """First-order scan |f(x) - f(y)| <= |x - y| * (a(x) + a(y))."""
    return main_inequality_scan(f, 1, grid, sampler, config, slack=slack,
                                directions=directions, delta_count=delta_count)


def triebel_scan(f: AnalyticField, order: int, s: float, g: SampledField,
                 sampler: PairSampler, *, slack: float = 0.05) -> InequalityReport:
    """Scan |diff_h^order f(x)| <= |h|^s * sum_l g(x + l h) with h = (y - x) / order.

    Pairs whose step exceeds one, or whose nodes leave the grid of g,
    are skipped and counted in the params.
    """
    if order < 1:
        raise ConfigError("the scan needs order >= 1")
    if s <= 0:
        raise ConfigError("the exponent s must be positive")
    if np.any(g.values < 0):
        raise ValueError("the coefficient field g must be nonnegative")
    pairs = sampler.draw()
    h = (pairs.y - pairs.x) / order
    hlen = np.linalg.norm(h, axis=1)
    keep = hlen <= 1.0
    skipped_long = int(np.sum(~keep))
    glo = np.asarray(g.grid.lo)
    ghi = np.asarray(g.grid.hi)
    inside = np.ones(len(pairs.x), dtype=bool)
    for l in range(order + 1):
        node = pairs.x + l * h
        inside &= np.all(node >= glo, axis=1) & np.all(node <= ghi, axis=1)
    skipped_outside = int(np.sum(keep & ~inside))
    keep &= inside
    if not np.any(keep):
        raise EmptyScanError("all pairs were skipped (step too long or nodes outside g)")
    x, y, h, d = pairs.x[keep], pairs.y[keep], h[keep], pairs.dist[keep]
    hlen = hlen[keep]
    node_values = [evaluate_batch(f, x + l * h) for l in range(order + 1)]
    lhs = np.abs(_difference_values(node_values, order))
    gsum = np.zeros(len(x))
    for l in range(order + 1):
        gsum += g.at(x + l * h)
    rhs = hlen ** s * gsum
    params = _scan_params("triebel", f, sampler, order, g.grid, slack, {
        "s": float(s),
        "skipped_long_step": skipped_long,
        "skipped_outside": skipped_outside,
        "attempts": pairs.attempts,
    })
    return build_report(params, x, y, lhs, rhs, slack)


def node_discard_check(f: AnalyticField, order: int, grid: GridSpec,
                       sampler: PairSampler, *, slack: float = 0.05,
                       directions=None, delta_count: int = 4) -> InequalityReport:
    """Pass from the two-endpoint bound to the all-node sum bound.

    Runs the main scan's geometry once, then re-checks the same pairs
    against |h|^order * sum_l g(x + l h) with the single coefficient
    field g = order^order * a built at the top ladder delta.  Nested
    radii make the top field dominate every per-delta field, so zero
    violations here certify the node-discarding step numerically.
    """
    if order < 1:
        raise ConfigError("the scan needs order >= 1")
    deltas, boundary = _resolve_deltas(sampler, grid, None, delta_count)
    ladder = _CoefficientLadder(f, grid, order, deltas, directions, boundary)
    pairs = sampler.draw(ladder.margin_of)
    idx = ladder.delta_index(pairs.dist)
    lhs_main = np.abs(_remainder_batch(f, pairs.x, pairs.y, order))
    ax = ladder.coefficient_at(idx, pairs.x)
    ay = ladder.coefficient_at(idx, pairs.y)
    rhs_main = pairs.dist ** order * (ax + ay)
    main_ratio = np.zeros(len(lhs_main))
    pos = rhs_main > 0
    main_ratio[pos] = lhs_main[pos] / rhs_main[pos]
    main_ratio[~pos & (lhs_main > 0)] = math.inf

    g = SampledField(grid, float(order) ** order * ladder.top.values)
    h = (pairs.y - pairs.x) / order
    hlen = np.linalg.norm(h, axis=1)
    node_values = [evaluate_batch(f, pairs.x + l * h) for l in range(order + 1)]
    lhs = np.abs(_difference_values(node_values, order))
    gsum = np.zeros(len(pairs.x))
    for l in range(order + 1):
        gsum += g.at(pairs.x + l * h)
    rhs = hlen ** order * gsum
    params = _scan_params("node_discard", f, sampler, order, grid, slack, {
        "deltas": [float(d) for d in ladder.deltas],
        "boundary": boundary,
        "g_scale": float(order) ** order,
        "main_max_ratio": float(np.max(main_ratio)),
        "main_violations": int(np.sum(main_ratio > 1.0 + slack)),
        "attempts": pairs.attempts,
    })
    return build_report(params, pairs.x, pairs.y, lhs, rhs, slack)


def hatl_scan(f: AnalyticField, order: int, s: float, g: SampledField,
              sampler: PairSampler, *, slack: float = 0.05) -> InequalityReport:
    """Scan the fractional-exponent class bound
    |remainder| <= |x - y|^s * (g(x) + g(y)) with 0 < s <= order."""
    if order < 1:
        raise ConfigError("the scan needs order >= 1")
    if not 0 < s <= order:
        raise ConfigError("the exponent must satisfy 0 < s <= order")
    if np.any(g.values < 0):
        raise ValueError("the coefficient field g must be nonnegative")
    pairs = sampler.draw()
    lhs = np.abs(_remainder_batch(f, pairs.x, pairs.y, order))
    rhs = pairs.dist ** s * (g.at(pairs.x) + g.at(pairs.y))
    params = _scan_params("hatl", f, sampler, order, g.grid, slack, {
        "s": float(s),
        "attempts": pairs.attempts,
    })
    return build_report(params, pairs.x, pairs.y, lhs, rhs, slack)


def quasinorm_upper(f: AnalyticField, order: int, p: float, grid: GridSpec,
                    config=None, *, directions=None,
                    delta: float | None = None) -> float:
    """Upper bound ||f||_p + ||order^order * a||_p for the class quasinorm.

    `a` is the maximal coefficient field at scale `delta` (default: a
    quarter of the smallest box side, or the config's delta).
    """
    if config is None:
        d = delta if delta is not None else min(grid.extent) / 4.0
        config = MaximalConfig(delta=d, radii=default_radii(d, max(grid.spacing)))
    g = gradient_magnitude_field(f, grid, order, directions)
    m_field = local_maximal_function(g, config)
    a_values = segment_ratio_constant(grid.dim) * m_field.values
    coeff = SampledField(grid, float(order) ** order * a_values)
    return lp_norm(sample(f, grid), p) + lp_norm(coeff, p)


def mollified_scan(f: AnalyticField, order: int, epsilon: float, grid: GridSpec,
                   sampler: PairSampler, *, slack: float = 0.05,
                   profile: str = "bump", directions=None,
                   delta_count: int = 4) -> InequalityReport:
    """Main scan for the mollified field and mollified coefficients.

    The field and each ladder coefficient field are convolved with the
    same kernel; differences of the smoothed field come from multilinear
    interpolation of the convolved samples.  Pairs keep an extra margin
    of one kernel support from the boundary so no contaminated value is
    ever read.
    """
    if order < 1:
        raise ConfigError("the scan needs order >= 1")
    phi = Mollifier(epsilon, grid.dim, profile=profile)
    cells = phi.margin_cells(grid.spacing)
    margin_len = max((c + 1) * sp for c, sp in zip(cells, grid.spacing))
    deltas, boundary = _resolve_deltas(sampler, grid, None, delta_count)
    if 2.0 * (margin_len + deltas[-1]) >= min(grid.extent):
        raise EmptyScanError(
            "the interior eroded by the kernel support and the ladder delta is empty")
    ladder = _CoefficientLadder(f, grid, order, deltas, directions, boundary)
    f_eps = convolve(sample(f, grid), phi)
    fields_eps = [convolve(fld, phi) for fld in ladder.fields]

    def margin_of(dist):
        return ladder.margin_of(dist) + margin_len

    pairs = sampler.draw(margin_of)
    idx = ladder.delta_index(pairs.dist)
    h = (pairs.y - pairs.x) / order
    node_values = [f_eps.at(pairs.x + l * h) for l in range(order + 1)]
    lhs = np.abs(_difference_values(node_values, order))
    ax = ladder.coefficient_at(idx, pairs.x, fields_eps)
    ay = ladder.coefficient_at(idx, pairs.y, fields_eps)
    rhs = pairs.dist ** order * (ax + ay)
    params = _scan_params("mollified", f, sampler, order, grid, slack, {
        "epsilon": float(epsilon),
        "profile": profile,
        "deltas": [float(d) for d in ladder.deltas],
        "boundary": boundary,
        "kernel_margin": float(margin_len),
        "attempts": pairs.attempts,
    })
    return build_report(params, pairs.x, pairs.y, lhs, rhs, slack)


# ---------------------------------------------------------------------------
# the exact-identity suite


def _identity_fields(rng: np.random.Generator, dim: int, index: int):
    """Rotate through random polynomials, the smooth corpus, and radial powers.

    The radial power lives on a positive-orthant box, so segments and
    positive telescoping steps stay clear of its excluded ball.
    """
    if index % 5 == 4:
        alpha = float(rng.uniform(0.5, 3.0))
        return PowerField(alpha, dim=dim), (np.full(dim, 0.3), np.full(dim, 1.3))
    if index % 3 != 0:
        return random_polynomial(rng, dim), _poly_box(dim)
    corpus = scan_corpus(dim)
    f = corpus[index // 3 % len(corpus)]
    return f, _poly_box(dim)


def _poly_box(dim: int):
    return np.full(dim, -1.2), np.full(dim, 1.2)


def _draw_pair(rng, lo, hi, min_sep=0.05):
    for _ in range(100):
        x = rng.uniform(lo, hi)
        y = rng.uniform(lo, hi)
        if np.linalg.norm(y - x) >= min_sep:
            return x, y
    raise EmptyScanError("could not draw a separated pair")


def identity_suite(draws: int = 200, seed: int = 0, *, binom=binomial) -> dict:
    """Battery of exact algebraic identities at machine-precision tolerances.

    Residuals are relative to 1 + the identity's own magnitude.  The
    `binom` argument is the fault-injection hook: replacing it with a
    corrupted table must break the suite.
    """
    from .differences import (
        QuadratureRule,
        forward_difference,
        g_integral,
        g_sum,
        lagrange_remainder,
        taylor_remainder,
        telescope_residual,
    )

    rng = np.random.default_rng(seed)
    results = {
        "lagrange_vs_difference": {"tolerance": 1e-10, "max_residual": 0.0},
        "telescoping": {"tolerance": 1e-12, "max_residual": 0.0},
        "integral_representation": {"tolerance": 1e-9, "max_residual": 0.0},
        "quadrature_cross_check": {"tolerance": 1e-9, "max_residual": 0.0},
        "annihilation": {"tolerance": 1e-12, "max_residual": 0.0},
        "leading_coefficient": {"tolerance": 1e-12, "max_residual": 0.0},
        "sign_law": {"tolerance": 0.0, "max_residual": 0.0},
        "taylor_annihilation": {"tolerance": 0.0, "max_residual": 0.0},
    }

    def bump(name, residual):
        entry = results[name]
        entry["max_residual"] = max(entry["max_residual"], abs(residual))
        entry["draws"] = entry.get("draws", 0) + 1

    for i in range(draws):
        dim = int(rng.integers(1, 4))
        f, (lo, hi) = _identity_fields(rng, dim, i)
        order = int(rng.integers(1, 7))
        x, y = _draw_pair(rng, lo, hi)
        h = (y - x) / order
        lr = lagrange_remainder(f, x, y, order)
        fd = forward_difference(f, x, h, order, binom=binom)
        bump("lagrange_vs_difference", (lr - fd) / (1.0 + max(abs(lr), abs(fd))))
        gs = g_sum(f, x, h, order, binom=binom)
        bump("sign_law", gs - (fd if order % 2 == 0 else -fd))

        k = int(rng.integers(1, 7))
        if isinstance(f, PowerField):
            # positive steps from a positive-orthant box keep every node
            # clear of the excluded ball
            step = rng.uniform(0.0, 0.15, dim)
        else:
            step = rng.uniform(-0.3, 0.3, dim)
        res = telescope_residual(f, x, step, k, binom=binom)
        fdk = forward_difference(f, x, step, k, binom=binom)
        bump("telescoping", res / (1.0 + abs(fdk)))

    for i in range(max(draws // 2, 50)):
        dim = int(rng.integers(1, 4))
        poly = random_polynomial(rng, dim)
        order = int(rng.integers(1, 5))
        x = rng.uniform(-1.0, 1.0, dim)
        h = rng.uniform(-0.4, 0.4, dim)
        if not np.any(h):
            h = np.full(dim, 0.1)
        fd = forward_difference(poly, x, h, order, binom=binom)
        den = 1.0 + abs(fd)
        tensor = g_integral(poly, x, h, order, QuadratureRule.gauss_tensor())
        collapsed = g_integral(poly, x, h, order, QuadratureRule.irwin_hall())
        bump("integral_representation", (tensor - fd) / den)
        bump("integral_representation", (collapsed - fd) / den)
        bump("quadrature_cross_check", (tensor - collapsed) / den)

        order = int(rng.integers(1, 7))
        low = random_polynomial(rng, dim, exact_degree=order - 1)
        xa = rng.uniform(-1.0, 1.0, dim)
        ha = rng.uniform(-0.4, 0.4, dim)
        bump("annihilation", forward_difference(low, xa, ha, order, binom=binom))
        ya = rng.uniform(-1.0, 1.0, dim)
        if not np.array_equal(xa, ya):
            bump("taylor_annihilation", taylor_remainder(low, xa, ya, order))

        mono_order = int(rng.integers(1, 7))
        mono = PolynomialField({(mono_order,): 1}, dim=1)
        hx = float(rng.uniform(0.05, 0.5))
        fd = forward_difference(mono, [0.0], [hx], mono_order, binom=binom)
        expected = math.factorial(mono_order) * hx ** mono_order
        bump("leading_coefficient", (fd - expected) / (1.0 + abs(expected)))

    passed = True
    for entry in results.values():
        entry["passed"] = entry["max_residual"] <= entry["tolerance"]
        passed = passed and entry["passed"]
    return {"passed": passed, "seed": seed, "draws": draws, "identities": results}
