"""Command-line front end: parse channel files, run region and converse
computations, emit CSV artifacts.

Exit codes: 0 success, 1 failed converse certification (verify only),
2 validation errors. Identical invocations produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .channel import canonicalize, load_channel
from .examples import FiniteFieldSpec, blackwell_sweep_hull, dof, finite_field_region
from .outerbound import case_spanning_lambdas, converse_to_csv, verify_converse
from .regions import (
    RegionPolygon,
    capacity_polygon,
    format_number,
    make_polygon,
    polygon_to_csv,
    primed_regions,
    proposition_regions,
    support_curve,
    transpose_polygon,
)
from .simplexopt import OptConfig


@dataclass
class RunConfig:
    """One CLI invocation; flags override any channel-file values."""

    command: str
    channel_path: str | None = None
    p1: float | None = None
    p2: float | None = None
    lambda_count: int = 64
    grid_denominator: int = 0
    u_size: int = 0
    tolerance: float = 5e-3
    out_path: str | None = None
    normalize: bool = False
    k: int = 2
    h: tuple[int, int, int, int] = (1, 1, 1, 0)
    px_grid: int = 0
    alpha_grid: int = 101


def _parse_h(text: str) -> tuple[int, int, int, int]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("matrix must be 4 comma-separated integers h11,h12,h21,h22")
    try:
        return tuple(int(p) for p in parts)  # type: ignore[return-value]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="statebc",
        description="Capacity regions of broadcast channels with two deterministic "
        "state-switched components (rates in bits).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def channel_opts(sp, with_out=True):
        sp.add_argument("--channel", required=True, help="channel spec JSON file")
        sp.add_argument("--p1", type=float, default=None, help="override p1 from the file")
        sp.add_argument("--p2", type=float, default=None, help="override p2 from the file")
        sp.add_argument("--grid", type=int, default=0, help="lattice denominator override")
        if with_out:
            sp.add_argument("--out", required=True, help="output CSV path")

    sp = sub.add_parser("region", help="capacity region polygon CSV")
    channel_opts(sp)
    sp.add_argument("--n-lambda", type=int, default=64, help="support samples per case segment")

    sp = sub.add_parser("support", help="support-function curve CSV")
    channel_opts(sp)
    sp.add_argument("--lambdas", type=int, default=64, help="number of lambda samples")

    sp = sub.add_parser("verify", help="converse certification (exit 1 on failure)")
    channel_opts(sp, with_out=False)
    sp.add_argument("--out", default=None, help="optional gap-table CSV path")
    sp.add_argument("--lambdas", type=int, default=32, help="number of lambda samples")
    sp.add_argument("--u-size", type=int, default=0, help="auxiliary alphabet size (default |X|+1)")
    sp.add_argument("--tol", type=float, default=5e-3, help="gap tolerance in bits")

    sp = sub.add_parser("regions4", help="four-region decomposition and its sweep cross-check")
    channel_opts(sp)
    sp.add_argument("--n-lambda", type=int, default=64)
    sp.add_argument("--px-grid", type=int, default=0, help="input-law lattice denominator")

    sp = sub.add_parser("example-blackwell", help="Blackwell-channel region from closed forms")
    sp.add_argument("--p1", type=float, required=True)
    sp.add_argument("--p2", type=float, required=True)
    sp.add_argument("--alpha-grid", type=int, default=101)
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("example-ff", help="finite-field channel region (analytic hull)")
    sp.add_argument("--k", type=int, default=2, help="prime field size")
    sp.add_argument("--h", type=_parse_h, default=(1, 1, 1, 0), help="h11,h12,h21,h22")
    sp.add_argument("--p1", type=float, required=True)
    sp.add_argument("--p2", type=float, required=True)
    sp.add_argument("--normalize", action="store_true", help="divide rates by log2 K")
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("dof", help="degrees of freedom p1 + (1 - p2)")
    sp.add_argument("--p1", type=float, required=True)
    sp.add_argument("--p2", type=float, required=True)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    cfg.channel_path = getattr(args, "channel", None)
    cfg.p1 = getattr(args, "p1", None)
    cfg.p2 = getattr(args, "p2", None)
    cfg.grid_denominator = getattr(args, "grid", 0)
    cfg.lambda_count = getattr(args, "n_lambda", getattr(args, "lambdas", 64))
    cfg.u_size = getattr(args, "u_size", 0)
    cfg.tolerance = getattr(args, "tol", 5e-3)
    cfg.out_path = getattr(args, "out", None)
    cfg.normalize = getattr(args, "normalize", False)
    cfg.k = getattr(args, "k", 2)
    cfg.h = getattr(args, "h", (1, 1, 1, 0))
    cfg.px_grid = getattr(args, "px_grid", 0)
    cfg.alpha_grid = getattr(args, "alpha_grid", 101)
    return cfg


def _opt_config(cfg: RunConfig) -> OptConfig | None:
    if cfg.grid_denominator > 0:
        return OptConfig(grid_denominator=cfg.grid_denominator)
    return None


def _header(p1: float, p2: float, extra: str = "") -> str:
    line = f"# p1={format_number(p1)} p2={format_number(p2)}"
    if extra:
        line += f" {extra}"
    return line + "\n"


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _scale_polygon(poly: RegionPolygon, factor: float) -> RegionPolygon:
    return make_polygon([(v.r1 * factor, v.r2 * factor) for v in poly.vertices], poly.label)


def run(cfg: RunConfig) -> int:
    if cfg.command == "region":
        spec = load_channel(cfg.channel_path, cfg.p1, cfg.p2)
        poly = capacity_polygon(spec, n_lambda=cfg.lambda_count, cfg=_opt_config(cfg))
        _write(cfg.out_path, _header(spec.p1, spec.p2) + polygon_to_csv(poly))
        return 0

    if cfg.command == "support":
        spec = load_channel(cfg.channel_path, cfg.p1, cfg.p2)
        canon, swapped = canonicalize(spec)
        lambdas = case_spanning_lambdas(canon, cfg.lambda_count)
        curve = support_curve(canon, lambdas, _opt_config(cfg))
        extra = "note=receivers-swapped" if swapped else ""
        lines = ["lambda,value,case"]
        for s in curve.samples:
            lines.append(f"{format_number(s.lam)},{format_number(s.value)},{s.case_id}")
        _write(cfg.out_path, _header(canon.p1, canon.p2, extra) + "\n".join(lines) + "\n")
        return 0

    if cfg.command == "verify":
        spec = load_channel(cfg.channel_path, cfg.p1, cfg.p2)
        canon, _ = canonicalize(spec)
        lambdas = case_spanning_lambdas(canon, cfg.lambda_count)
        u_size = cfg.u_size if cfg.u_size > 0 else None
        report = verify_converse(canon, lambdas, u_size=u_size, tol=cfg.tolerance, cfg=_opt_config(cfg))
        if cfg.out_path:
            _write(cfg.out_path, _header(canon.p1, canon.p2) + converse_to_csv(report))
        verdict = "pass" if report.passed else "fail"
        print(
            f"max_gap={format_number(report.max_gap)} "
            f"tolerance={format_number(report.tolerance)} result={verdict}"
        )
        return 0 if report.passed else 1

    if cfg.command == "regions4":
        spec = load_channel(cfg.channel_path, cfg.p1, cfg.p2)
        canon, _ = canonicalize(spec)
        polys = proposition_regions(canon, n_lambda=cfg.lambda_count, cfg=_opt_config(cfg))
        polys += primed_regions(canon, px_grid=cfg.px_grid or None)
        header = _header(canon.p1, canon.p2)
        for poly in polys:
            name = poly.label.replace("'", "p")
            _write(f"{cfg.out_path}{name}.csv", header + polygon_to_csv(poly))
        return 0

    if cfg.command == "example-blackwell":
        canon_p1, canon_p2 = max(cfg.p1, cfg.p2), min(cfg.p1, cfg.p2)
        poly = blackwell_sweep_hull(canon_p1, canon_p2, grid=cfg.alpha_grid)
        if cfg.p1 < cfg.p2:
            poly = transpose_polygon(poly)
        _write(cfg.out_path, _header(cfg.p1, cfg.p2) + polygon_to_csv(poly))
        return 0

    if cfg.command == "example-ff":
        ff = FiniteFieldSpec(cfg.k, ((cfg.h[0], cfg.h[1]), (cfg.h[2], cfg.h[3])))
        canon_p1, canon_p2 = max(cfg.p1, cfg.p2), min(cfg.p1, cfg.p2)
        poly = finite_field_region(ff, canon_p1, canon_p2)
        if cfg.p1 < cfg.p2:
            poly = transpose_polygon(poly)
        extra = f"k={cfg.k}"
        if cfg.normalize:
            poly = _scale_polygon(poly, 1.0 / math.log2(cfg.k))
            extra += " normalized=log2K"
        _write(cfg.out_path, _header(cfg.p1, cfg.p2, extra) + polygon_to_csv(poly))
        return 0

    if cfg.command == "dof":
        print(format_number(dof(cfg.p1, cfg.p2)))
        return 0

    raise ValueError(f"unknown command {cfg.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = config_from_args(args)
    try:
        return run(cfg)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())
