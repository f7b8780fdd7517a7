"""Command-line front end for the identity suite, scans, and geometry tables.

Subcommands: `identities` (exact algebraic identities), `verify`
(inequality scans), `geometry` (ball/lens volumes and the segment
constant), `mollify` (Young checks plus mollified scans), and `triebel`
(the all-node-sum bound with a supplied coefficient choice).

Options can come from a JSON config file (`--config`); explicit flags
win over the file, the file wins over built-in defaults.  Exit codes:
0 all checks passed, 1 a check failed, 2 usage or configuration error,
3 infeasible configuration (nothing admissible to scan).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from .differences import binomial
from .exceptions import ConfigError, DomainError, EmptyScanError
from .fields import GridSpec, SampledField, parse_field, sample
from .maximal import (
    MaximalConfig,
    ball_volume,
    default_radii,
    lens_volume,
    segment_ratio_constant,
)
from .mollify import Mollifier, default_epsilons, young_check
from .verify import (
    Box,
    Domain,
    PairSampler,
    _CoefficientLadder,
    _resolve_deltas,
    hatl_scan,
    identity_suite,
    main_inequality_scan,
    mollified_scan,
    node_discard_check,
    triebel_scan,
)

_DEFAULTS = {
    "draws": 200,
    "seed": 0,
    "pairs": 2000,
    "m": 1,
    "s": None,
    "p": "1,2,inf",
    "delta": None,
    "eps": None,
    "min_sep": 0.05,
    "max_sep": 0.4,
    "slack": 0.05,
    "dim": None,
    "grid": "-1:1:201",
    "domain": "full",
    "field": "sin:w=3",
    "g": "auto",
    "profile": "bump",
    "boundary": None,
    "scan": "lemma1",
    "format": "json",
    "out": None,
    "workers": 1,
    "radius": 1.0,
    "distance": 1.0,
    "corrupt_binomial": False,
}


def _corrupted_binomial(l: int, j: int) -> int:
    """Fault-injection table: one coefficient is off by one."""
    value = binomial(l, j)
    if (l, j) == (4, 2):
        return value + 1
    return value


def _parse_grid(text: str, dim: int | None) -> GridSpec:
    chunks = [c for c in text.split(";") if c.strip()]
    axes = []
    for chunk in chunks:
        parts = chunk.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid axis {chunk!r} must be lo:hi:points")
        try:
            axes.append((float(parts[0]), float(parts[1]), int(parts[2])))
        except ValueError as exc:
            raise ConfigError(f"cannot parse grid axis {chunk!r}: {exc}") from exc
    if len(axes) == 1 and dim is not None and dim > 1:
        axes = axes * dim
    if dim is not None and len(axes) != dim:
        raise ConfigError(f"grid has {len(axes)} axes but dimension {dim} was requested")
    lo, hi, pts = zip(*axes)
    return GridSpec(lo, hi, pts)


def _parse_domain(text: str, grid: GridSpec) -> Domain:
    outer = Box.of_grid(grid)
    if text in ("full", "box", ""):
        return Domain(outer)
    if text.startswith("hole="):
        body = text[len("hole="):]
        try:
            lo_text, hi_text = body.split(":")
            lo = tuple(float(v) for v in lo_text.split(","))
            hi = tuple(float(v) for v in hi_text.split(","))
        except ValueError as exc:
            raise ConfigError(
                f"hole domain must be hole=l0,l1,..:h0,h1,.., got {text!r}") from exc
        return Domain(outer, hole=Box(lo, hi))
    raise ConfigError(f"unknown domain spec {text!r} (use 'full' or 'hole=lo:hi')")


def _parse_float_list(text, name: str) -> list[float]:
    if text is None:
        return []
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    out = []
    for piece in str(text).split(","):
        piece = piece.strip()
        if not piece:
            continue
        if piece.lower() in ("inf", "infinity"):
            out.append(math.inf)
        else:
            try:
                out.append(float(piece))
            except ValueError as exc:
                raise ConfigError(f"cannot parse {name} entry {piece!r}") from exc
    return out


def _resolve(args: argparse.Namespace) -> dict:
    """Merge explicit flags over the config file over the defaults."""
    file_cfg = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as handle:
                file_cfg = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {args.config}: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise ConfigError("the config file must hold a JSON object")
        unknown = set(file_cfg) - set(_DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    resolved = {}
    for key, default in _DEFAULTS.items():
        explicit = getattr(args, key, None)
        if explicit is not None and explicit is not False:
            resolved[key] = explicit
        elif key in file_cfg:
            resolved[key] = file_cfg[key]
        else:
            resolved[key] = default
    resolved["command"] = args.command
    if resolved["workers"] is not None and int(resolved["workers"]) < 1:
        raise ConfigError("--workers must be at least 1")
    return resolved


def _dump_config(cfg: dict, requested: bool) -> None:
    if requested:
        print(json.dumps({k: v for k, v in cfg.items() if k != "command"},
                         sort_keys=True, indent=2, default=str))


def _field_and_grid(cfg: dict):
    grid_text = str(cfg["grid"])
    dim = cfg["dim"]
    if dim is None and ";" in grid_text:
        dim = len([c for c in grid_text.split(";") if c.strip()])
    field = parse_field(str(cfg["field"]), dim=int(dim) if dim else None)
    grid = _parse_grid(grid_text, field.dim)
    return field, grid


def _sampler(cfg: dict, grid: GridSpec) -> PairSampler:
    domain = _parse_domain(str(cfg["domain"]), grid)
    return PairSampler(domain, int(cfg["pairs"]), int(cfg["seed"]),
                       float(cfg["min_sep"]), float(cfg["max_sep"]))


def _write_report(report, cfg: dict) -> None:
    if not cfg["out"]:
        return
    if str(cfg["format"]).lower() == "csv":
        report.write_csv(cfg["out"])
    else:
        report.write_json(cfg["out"])
    print(f"report written to {cfg['out']}")


def _print_report(label: str, report) -> None:
    state = "PASS" if report.passed else "FAIL"
    print(f"[{label}] pairs={report.n_pairs} violations={report.n_violations} "
          f"max_ratio={report.max_ratio:.6g} p99={report.quantiles['p99']:.6g} "
          f"slack={report.slack:g} {state}")


def _cmd_identities(cfg: dict) -> int:
    binom = _corrupted_binomial if cfg["corrupt_binomial"] else binomial
    suite = identity_suite(draws=int(cfg["draws"]), seed=int(cfg["seed"]), binom=binom)
    for name, entry in sorted(suite["identities"].items()):
        state = "PASS" if entry["passed"] else "FAIL"
        print(f"[identities] {name}: max_residual={entry['max_residual']:.3e} "
              f"tolerance={entry['tolerance']:g} {state}")
    if cfg["out"]:
        with open(cfg["out"], "w") as handle:
            json.dump(suite, handle, sort_keys=True, indent=2)
            handle.write("\n")
        print(f"report written to {cfg['out']}")
    print("identities:", "PASS" if suite["passed"] else "FAIL")
    return 0 if suite["passed"] else 1


def _cmd_verify(cfg: dict) -> int:
    field, grid = _field_and_grid(cfg)
    sampler = _sampler(cfg, grid)
    order = int(cfg["m"])
    config = None
    if cfg["delta"] is not None:
        delta = float(cfg["delta"])
        config = MaximalConfig(
            delta=delta, radii=default_radii(delta, max(grid.spacing)),
            boundary=cfg["boundary"] or "reject")
    scan = str(cfg["scan"]).replace("-", "_")
    if scan == "lemma1":
        report = main_inequality_scan(field, 1, grid, sampler, config,
                                      slack=float(cfg["slack"]))
    elif scan == "main":
        report = main_inequality_scan(field, order, grid, sampler, config,
                                      slack=float(cfg["slack"]))
    elif scan == "node_discard":
        report = node_discard_check(field, order, grid, sampler,
                                    slack=float(cfg["slack"]))
    elif scan == "hatl":
        s = float(cfg["s"]) if cfg["s"] is not None else float(order)
        deltas, boundary = _resolve_deltas(sampler, grid, config, 4)
        ladder = _CoefficientLadder(field, grid, order, deltas, None, boundary)
        g = SampledField(grid, float(order) ** order * ladder.top.values)
        report = hatl_scan(field, order, s, g, sampler, slack=float(cfg["slack"]))
    else:
        raise ConfigError(f"unknown scan {cfg['scan']!r} "
                          "(use lemma1, main, node-discard, or hatl)")
    _print_report(scan, report)
    _write_report(report, cfg)
    return 0 if report.passed else 1


def _cmd_geometry(cfg: dict) -> int:
    dims = [int(cfg["dim"])] if cfg["dim"] else [1, 2, 3]
    radius = float(cfg["radius"])
    distance = float(cfg["distance"])
    rows = []
    for n in dims:
        rows.append({
            "dim": n,
            "ball_volume": ball_volume(n, radius),
            "lens_volume": lens_volume(n, radius, distance),
            "segment_ratio_constant": segment_ratio_constant(n),
        })
        print(f"[geometry] dim={n} ball({radius:g})={rows[-1]['ball_volume']:.12g} "
              f"lens({radius:g},{distance:g})={rows[-1]['lens_volume']:.12g} "
              f"C={rows[-1]['segment_ratio_constant']:.12g}")
    if cfg["out"]:
        with open(cfg["out"], "w") as handle:
            json.dump({"radius": radius, "distance": distance, "rows": rows},
                      handle, sort_keys=True, indent=2)
            handle.write("\n")
        print(f"report written to {cfg['out']}")
    return 0


def _cmd_mollify(cfg: dict) -> int:
    field, grid = _field_and_grid(cfg)
    order = int(cfg["m"])
    epsilons = _parse_float_list(cfg["eps"], "eps") or list(default_epsilons(grid))
    exponents = _parse_float_list(cfg["p"], "p") or [1.0, 2.0, math.inf]
    profile = str(cfg["profile"])
    sampled = sample(field, grid)
    all_ok = True
    reports = {"young": [], "scans": []}
    for eps in epsilons:
        phi = Mollifier(eps, grid.dim, profile=profile)
        cells = phi.margin_cells(grid.spacing)
        supported = np.array(sampled.values)
        mask = np.ones(grid.points, dtype=bool)
        interior = tuple(slice(2 * c, n - 2 * c) for c, n in zip(cells, grid.points))
        mask[interior] = False
        supported[mask] = 0.0
        u = SampledField(grid, supported)
        for p in exponents:
            rep = young_check(u, phi, p)
            state = "PASS" if rep.passed else "FAIL"
            print(f"[young] eps={eps:g} p={p:g} lhs={rep.lhs:.6g} rhs={rep.rhs:.6g} {state}")
            reports["young"].append({"eps": eps, **rep.to_dict()})
            all_ok = all_ok and rep.passed
        sampler = _sampler(cfg, grid)
        scan = mollified_scan(field, order, eps, grid, sampler,
                              slack=float(cfg["slack"]), profile=profile)
        _print_report(f"mollified eps={eps:g}", scan)
        reports["scans"].append(scan.to_dict())
        all_ok = all_ok and scan.passed
    if cfg["out"]:
        with open(cfg["out"], "w") as handle:
            json.dump(reports, handle, sort_keys=True, indent=2)
            handle.write("\n")
        print(f"report written to {cfg['out']}")
    print("mollify:", "PASS" if all_ok else "FAIL")
    return 0 if all_ok else 1


def _cmd_triebel(cfg: dict) -> int:
    field, grid = _field_and_grid(cfg)
    order = int(cfg["m"])
    s = float(cfg["s"]) if cfg["s"] is not None else float(order)
    sampler = _sampler(cfg, grid)
    if str(cfg["g"]) == "zero":
        g = SampledField(grid, np.zeros(grid.points))
    elif str(cfg["g"]) == "auto":
        deltas, boundary = _resolve_deltas(sampler, grid, None, 4)
        ladder = _CoefficientLadder(field, grid, order, deltas, None, boundary)
        g = SampledField(grid, float(order) ** order * ladder.top.values)
    else:
        raise ConfigError(f"unknown coefficient choice {cfg['g']!r} (use auto or zero)")
    report = triebel_scan(field, order, s, g, sampler, slack=float(cfg["slack"]))
    _print_report("triebel", report)
    _write_report(report, cfg)
    return 0 if report.passed else 1


_COMMANDS = {
    "identities": _cmd_identities,
    "verify": _cmd_verify,
    "geometry": _cmd_geometry,
    "mollify": _cmd_mollify,
    "triebel": _cmd_triebel,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sobolev-pointwise",
        description="Finite-difference identities and pointwise inequality scans.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file; explicit flags win")
        p.add_argument("--dump-config", action="store_true", dest="dump_config",
                       help="print the resolved configuration before running")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="write a JSON (or CSV) report here")
        p.add_argument("--format", choices=["json", "csv"])
        p.add_argument("--workers", type=int,
                       help="accepted for compatibility; scans are vectorized "
                            "and results never depend on it")

    p = sub.add_parser("identities", help="run the exact-identity suite")
    common(p)
    p.add_argument("--draws", type=int)
    p.add_argument("--corrupt-binomial", action="store_true", dest="corrupt_binomial",
                   help="fault injection: corrupt one binomial coefficient "
                        "(the suite must then fail)")

    p = sub.add_parser("verify", help="run an inequality scan")
    common(p)
    p.add_argument("--scan", choices=["lemma1", "main", "node-discard", "hatl"])
    p.add_argument("--field")
    p.add_argument("--grid")
    p.add_argument("--dim", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--s", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--pairs", type=int)
    p.add_argument("--min-sep", type=float, dest="min_sep")
    p.add_argument("--max-sep", type=float, dest="max_sep")
    p.add_argument("--slack", type=float)
    p.add_argument("--domain")
    p.add_argument("--boundary", choices=["reject", "clip"])

    p = sub.add_parser("geometry", help="ball and lens volumes, segment constant")
    common(p)
    p.add_argument("--dim", type=int)
    p.add_argument("--radius", type=float)
    p.add_argument("--distance", type=float)

    p = sub.add_parser("mollify", help="Young checks and mollified scans")
    common(p)
    p.add_argument("--field")
    p.add_argument("--grid")
    p.add_argument("--dim", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--eps", help="comma list of mollifier scales")
    p.add_argument("--p", help="comma list of norm exponents (inf allowed)")
    p.add_argument("--pairs", type=int)
    p.add_argument("--min-sep", type=float, dest="min_sep")
    p.add_argument("--max-sep", type=float, dest="max_sep")
    p.add_argument("--slack", type=float)
    p.add_argument("--domain")
    p.add_argument("--profile", choices=["bump", "gauss"])

    p = sub.add_parser("triebel", help="all-node-sum bound scan")
    common(p)
    p.add_argument("--field")
    p.add_argument("--grid")
    p.add_argument("--dim", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--s", type=float)
    p.add_argument("--g", choices=["auto", "zero"],
                   help="coefficient field: auto builds m^m times the maximal "
                        "coefficient, zero is the negative control")
    p.add_argument("--pairs", type=int)
    p.add_argument("--min-sep", type=float, dest="min_sep")
    p.add_argument("--max-sep", type=float, dest="max_sep")
    p.add_argument("--slack", type=float)
    p.add_argument("--domain")
    return parser


# Values for these flags may start with a dash (negative grid bounds,
# polynomials with a leading minus), which argparse would misread as an
# option.  Joining flag and value with "=" sidesteps that.
_VALUE_FLAGS = ("--grid", "--field", "--domain", "--eps", "--p")


def _join_values(argv):
    out, it = [], iter(argv)
    for token in it:
        if token in _VALUE_FLAGS:
            value = next(it, None)
            out.append(token if value is None else f"{token}={value}")
        else:
            out.append(token)
    return out


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(_join_values(sys.argv[1:] if argv is None else argv))
    start = time.time()
    try:
        cfg = _resolve(args)
        _dump_config(cfg, getattr(args, "dump_config", False))
        code = _COMMANDS[args.command](cfg)
    except EmptyScanError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    print(f"done in {time.time() - start:.2f} s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
