"""Command-line entry point.

Subcommands: asym, numeric, compare, trace, quasimode, dk.  Every run
writes its outputs next to a manifest JSON echoing the effective
configuration, so results are reproducible from the manifest alone.

Exit codes: 0 ok, 2 configuration error, 3 numerical failure (partial
outputs preserved), 4 validity-window violation under --strict.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .errors import SpecEdgeError
from .examples import (
    EXAMPLE_IDS,
    ExamplePoint,
    advection_point,
    airy_norm,
    airy_point,
    cubic_norm,
    cubic_point,
    dk_growth_rate,
    dk_rate_quadrature,
    example_matrix,
    harmonic_norm,
    harmonic_point,
    validity_strip,
)
from .levels import ScanAxis, level_asymptotic, trace_numeric, write_levels_csv
from .operators import CSV_HEADER, Grid1D, first_order_matrix, resolvent_norm
from .quasimodes import ModeSide, build_mode, residual, window
from .symbols import catalog

SCHEMA_VERSION = "1"
ASYM_HEADER = "re_z,im_z,h,alpha,log_norm_asym,floor_log,correction_scale,valid"


class ConfigError(Exception):
    pass


def parse_range(spec: str):
    """Inclusive range: start:stop:count (linear), suffix L for log spacing."""
    try:
        parts = spec.split(":")
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) != 3:
            raise ValueError
        log = parts[2].endswith(("L", "l"))
        count = int(parts[2][:-1] if log else parts[2])
        start, stop = float(parts[0]), float(parts[1])
    except ValueError:
        raise ConfigError(f"bad range {spec!r}: expected start:stop:count[L]") from None
    if count < 1:
        raise ConfigError(f"bad range {spec!r}: count must be >= 1")
    if count == 1:
        return [start]
    if log:
        if start <= 0 or stop <= 0:
            raise ConfigError(f"log range {spec!r} needs positive endpoints")
        return list(np.geomspace(start, stop, count))
    return list(np.linspace(start, stop, count))


def read_config(path: str) -> dict:
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"bad config line {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _parallel(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _fmt(v) -> str:
    return "" if v is None else repr(float(v))


# --- point construction ------------------------------------------------------


def build_points(args) -> list[ExamplePoint]:
    ex = args.example
    if ex == "airy":
        if not args.re_z:
            raise ConfigError("airy needs --re-z")
        ims = parse_range(args.im_z) if args.im_z else [0.0]
        return [airy_point(re, im) for re in parse_range(args.re_z) for im in ims]
    if ex == "harmonic":
        if not args.re_z:
            raise ConfigError("harmonic needs --re-z")
        res = parse_range(args.re_z)
        if args.im_z:
            pts = []
            for re in res:
                for im in parse_range(args.im_z):
                    z = complex(re, im)
                    ok, reason = validity_strip("harmonic", z)
                    pts.append(ExamplePoint("harmonic", z, 1.0 / re, im / re,
                                            harmonic_norm(z), ok, reason))
            return pts
        return [harmonic_point(re, exponent=args.exponent) for re in res]
    if ex == "cubic":
        if not args.im_z:
            raise ConfigError("cubic needs --im-z")
        ims = parse_range(args.im_z)
        if args.re_z:
            pts = []
            for im in ims:
                for re in parse_range(args.re_z):
                    z = complex(re, im)
                    ok, reason = validity_strip("cubic", z)
                    pts.append(ExamplePoint("cubic", z, im ** (-5.0 / 6.0), re / im,
                                            cubic_norm(z), ok, reason))
            return pts
        return [cubic_point(im, exponent=args.exponent) for im in ims]
    if ex == "advection":
        if not args.alpha:
            raise ConfigError("advection needs --alpha")
        return [advection_point(a, h_tilde=args.h_tilde)
                for a in parse_range(args.alpha)]
    raise ConfigError(f"unknown example {args.example!r}")


def numeric_sample(point: ExamplePoint, n):
    A = example_matrix(point.example, point.z, n=n,
                       h=point.h if point.example == "advection" else None)
    return resolvent_norm(A, point.z, alpha=point.alpha)


# --- commands ----------------------------------------------------------------


def cmd_asym(args, manifest):
    points = build_points(args)
    _strict_check(args, points)
    with open(args.out + ".csv", "w", newline="") as fh:
        fh.write(ASYM_HEADER + "\n")
        for p in points:
            e = p.estimate
            fh.write(",".join([
                _fmt(p.z.real), _fmt(p.z.imag), _fmt(p.h), _fmt(p.alpha),
                _fmt(e.log_leading), _fmt(e.floor_log), _fmt(e.correction_scale),
                "1" if p.strip_ok else "0",
            ]) + "\n")
    manifest["grid"]["points"] = len(points)
    return [args.out + ".csv"]


def _numeric_rows(args, points, with_asym: bool):
    samples = _parallel(lambda p: numeric_sample(p, args.n), points, args.workers)
    rows = []
    for p, s in zip(points, samples):
        if s.error is not None:
            raise SpecEdgeError(f"sample at z={p.z} failed: {s.error}")
        asym = p.estimate.log_leading if with_asym else None
        floor = p.estimate.floor_log if with_asym else None
        row = ",".join([
            _fmt(p.z.real), _fmt(p.z.imag), _fmt(p.h), _fmt(p.alpha),
            _fmt(s.sigma_min), _fmt(s.log_norm_numeric), _fmt(asym), _fmt(floor),
            "1" if (s.valid and p.strip_ok) else "0",
        ])
        if with_asym:
            rel = abs(s.log_norm_numeric - p.estimate.log_leading) / abs(s.log_norm_numeric)
            row += "," + _fmt(rel)
        rows.append(row)
    return rows


def cmd_numeric(args, manifest):
    points = build_points(args)
    _strict_check(args, points)
    rows = _numeric_rows(args, points, with_asym=False)
    with open(args.out + ".csv", "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        fh.writelines(r + "\n" for r in rows)
    manifest["grid"]["points"] = len(points)
    return [args.out + ".csv"]


def cmd_compare(args, manifest):
    points = build_points(args)
    _strict_check(args, points)
    rows = _numeric_rows(args, points, with_asym=True)
    with open(args.out + ".csv", "w", newline="") as fh:
        fh.write(CSV_HEADER + ",rel_log_err\n")
        fh.writelines(r + "\n" for r in rows)
    manifest["grid"]["points"] = len(points)
    return [args.out + ".csv"]


def cmd_trace(args, manifest):
    if args.example not in ("harmonic", "cubic"):
        raise ConfigError("trace supports --example harmonic or cubic")
    if not args.axis_values:
        raise ConfigError("trace needs --axis-values")
    axis_values = parse_range(args.axis_values)
    eps = float(args.eps)
    axis = ScanAxis.FIXED_RE if args.example == "harmonic" else ScanAxis.FIXED_IM

    def sigma_fn(z: complex) -> float:
        A = example_matrix(args.example, z, n=args.n)
        return resolvent_norm(A, z).sigma_min

    def bracket_fn(av: float):
        guess = level_asymptotic(args.example, eps, av)
        t = guess.z.imag if axis is ScanAxis.FIXED_RE else guess.z.real
        return (0.4 * t, 1.8 * t)

    pts = trace_numeric(sigma_fn, eps, axis, axis_values, bracket_fn,
                        rel_tol=args.level_tol)
    pts += [level_asymptotic(args.example, eps, av) for av in axis_values]
    write_levels_csv(args.out + ".csv", pts)
    manifest["grid"]["points"] = len(pts)
    return [args.out + ".csv"]


def cmd_quasimode(args, manifest):
    hs = parse_range(args.h_values)
    model = catalog("airy-fourier", c=1.0)
    # stay right of the opposite turning region (the mode regrows past x = -2)
    interval = (-1.8, 3.0)
    n = args.n or 2001
    files = []
    # profile at the first h
    mode0 = build_mode(model, hs[0], anchor=1.0, side=ModeSide.PLUS,
                       interval=interval, n_points=n)
    path = args.out + "_mode.csv"
    with open(path, "w", newline="") as fh:
        fh.write("x,re,im\n")
        for x, v in zip(mode0.grid, mode0.values):
            fh.write(f"{_fmt(x)},{_fmt(v.real)},{_fmt(v.imag)}\n")
    files.append(path)
    # residual table across h
    chi = lambda x: window(x, flat=(0.75, 1.25), edge=0.35)
    path = args.out + "_residuals.csv"
    with open(path, "w", newline="") as fh:
        fh.write("h,residual\n")
        for h in hs:
            mode = build_mode(model, h, anchor=1.0, side=ModeSide.PLUS,
                              interval=interval, n_points=n)
            A = first_order_matrix(lambda x: -1j * x ** 2 + 1j, h,
                                   Grid1D.segment(interval[0], interval[1], n))
            fh.write(f"{_fmt(h)},{_fmt(residual(A, mode, chi))}\n")
    files.append(path)
    manifest["grid"]["h_values"] = [float(h) for h in hs]
    return files


def cmd_dk(args, manifest):
    thetas = parse_range(args.theta)
    with open(args.out + ".csv", "w", newline="") as fh:
        fh.write("theta,rate_closed,rate_quadrature\n")
        for t in thetas:
            fh.write(f"{_fmt(t)},{_fmt(dk_growth_rate(t))},{_fmt(dk_rate_quadrature(t))}\n")
    manifest["grid"]["points"] = len(thetas)
    return [args.out + ".csv"]


def _strict_check(args, points) -> None:
    if args.strict:
        bad = [p for p in points if not p.strip_ok]
        if bad:
            raise _StrictViolation(
                f"{len(bad)} point(s) outside the validity window, e.g. "
                f"z={bad[0].z} ({bad[0].strip_reason})"
            )


class _StrictViolation(Exception):
    pass


COMMANDS = {
    "asym": cmd_asym,
    "numeric": cmd_numeric,
    "compare": cmd_compare,
    "trace": cmd_trace,
    "quasimode": cmd_quasimode,
    "dk": cmd_dk,
}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specedge",
        description="Resolvent-norm asymptotics near the symbol-range boundary, "
                    "cross-validated against dense discretizations.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--example", choices=EXAMPLE_IDS, default="airy")
    parser.add_argument("--re-z", help="range start:stop:count[L]")
    parser.add_argument("--im-z", help="range start:stop:count[L]")
    parser.add_argument("--alpha", help="range of boundary distances")
    parser.add_argument("--theta", help="range of rotation angles (dk)")
    parser.add_argument("--h-values", default="0.08:0.01:4L",
                        help="range of semiclassical parameters (quasimode)")
    parser.add_argument("--h-tilde", type=float, default=0.15,
                        help="h / alpha^{3/2} for advection points")
    parser.add_argument("--exponent", type=float, default=8.0,
                        help="target leading exponent for harmonic/cubic points")
    parser.add_argument("--eps", type=float, default=math.exp(-8.0),
                        help="level-set value (trace)")
    parser.add_argument("--axis-values", help="scan-line range (trace)")
    parser.add_argument("--n", type=int, default=None, help="grid-size override")
    parser.add_argument("--level-tol", type=float, default=1e-3)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", default="specedge_run", help="output path prefix")
    parser.add_argument("--strict", action="store_true",
                        help="exit 4 when any point leaves the validity window")
    parser.add_argument("--config", help="key=value config file (flags win)")
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = make_parser()
    # config file provides defaults; explicit flags override
    if "--config" in argv:
        try:
            cfg_path = argv[argv.index("--config") + 1]
        except IndexError:
            parser.error("--config needs a path")
        try:
            cfg = read_config(cfg_path)
        except (OSError, ConfigError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
        known = {a.dest for a in parser._actions}
        unknown = set(cfg) - known
        if unknown:
            print(f"config error: unknown keys {sorted(unknown)}", file=sys.stderr)
            return 2
        parser.set_defaults(**cfg)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for key in ("n", "workers"):
        v = getattr(args, key)
        if isinstance(v, str):
            setattr(args, key, int(v))
    for key in ("h_tilde", "exponent", "eps", "level_tol"):
        v = getattr(args, key)
        if isinstance(v, str):
            setattr(args, key, float(v))

    manifest = {
        "command": args.command,
        "example": args.example,
        "grid": {
            "re_z": args.re_z, "im_z": args.im_z, "alpha": args.alpha,
            "theta": args.theta, "h_values": args.h_values,
            "h_tilde": args.h_tilde, "exponent": args.exponent,
            "eps": args.eps, "axis_values": args.axis_values, "n": args.n,
        },
        "tolerances": {"level_tol": args.level_tol, "quad_tol": 1e-12},
        "workers": args.workers,
        "wall_seconds": None,
        "schema_version": SCHEMA_VERSION,
    }
    start = time.monotonic()
    try:
        COMMANDS[args.command](args, manifest)
    except (ConfigError,) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except _StrictViolation as exc:
        print(f"validity violation: {exc}", file=sys.stderr)
        _write_manifest(args, manifest, start)
        return 4
    except SpecEdgeError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        _write_manifest(args, manifest, start)
        return 3
    _write_manifest(args, manifest, start)
    return 0


def _write_manifest(args, manifest, start) -> None:
    manifest["wall_seconds"] = round(time.monotonic() - start, 3)
    with open(args.out + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    sys.exit(main())
