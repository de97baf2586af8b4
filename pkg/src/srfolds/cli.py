"""Command-line front end: geodesic endpoints, conjugate-locus scans, self-test.

Subcommands:

    expmap     evaluate the time-t endpoint and momentum of a normal geodesic
    conj-scan  locate and classify conjugate covectors along covector rays
    selftest   run the built-in verification battery

Structures are selected with --structure {grushin, su2, sl2}; coordinate lists
are comma-separated (grushin uses 2 fiber coordinates, the groups use 3 and
are always based at the identity). Output is text, CSV, or JSON; every float
is printed with 12 significant digits so runs diff cleanly. Scans over several
--direction flags can be parallelized by setting SRFOLDS_THREADS; results are
merged back in input order, so the output is identical at any thread count.
Exit codes: 0 success, 1 computation failure (or self-test failure), 2 usage
error.
"""

from __future__ import annotations

import argparse
import json
import os
import platform
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .errors import SrfoldsError
from .grushin import GrushinBase, grushin_adapter, grushin_exp
from .numeric import DEFAULT_RANK_TOL_FACTOR, DEFAULT_ROOT_TOL, DEFAULT_SCAN_POINTS
from .selftest import format_report, run_selftest
from .singularity import PAIRING_TOL, SECOND_ORDER_TOL, scan_ray
from .sl2 import sl2_adapter, sl2_exp
from .su2 import su2_adapter, su2_exp

CSV_HEADER = "s,stratum,order,class,k1,k2,k3,f0,f1"


class _UsageError(Exception):
    """Bad arguments detected after argparse (arity, structure mismatch)."""


def round12(x: float) -> float:
    """Round to 12 significant digits for stable printed artifacts."""
    return float(f"{float(x):.12g}") + 0.0  # + 0.0 turns -0.0 into 0.0


def _fmt(x: float) -> str:
    return f"{round12(x):.12g}"


def _parse_floats(text: str, name: str, arity: int) -> list[float]:
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise _UsageError(f"could not parse --{name} {text!r} as comma-separated reals")
    if len(values) != arity:
        raise _UsageError(
            f"--{name} needs {arity} comma-separated values, got {len(values)}")
    return values


def _fiber_dim(structure: str) -> int:
    return 2 if structure == "grushin" else 3


def _versions() -> dict:
    return {"srfolds": __version__, "numpy": np.__version__,
            "scipy": scipy.__version__, "python": platform.python_version()}


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_text(text + "\n")
    else:
        print(text)


def _grushin_base(args) -> GrushinBase:
    x0, y0 = _parse_floats(args.base, "base", 2)
    return GrushinBase(alpha=args.alpha, x0=x0, y0=y0)


def _check_structure_flags(args) -> None:
    if args.structure != "grushin":
        if args.alpha is not None:
            raise _UsageError("--alpha only applies to --structure grushin")
        if args.base != "0,0":
            raise _UsageError(f"{args.structure} geodesics start at the identity; "
                              "--base is not configurable")
    if args.alpha is None:
        args.alpha = 1.0


def cmd_expmap(args) -> int:
    _check_structure_flags(args)
    cov = _parse_floats(args.covector, "covector", _fiber_dim(args.structure))
    config = {"command": "expmap", "structure": args.structure,
              "covector": cov, "t": args.t}
    if args.structure == "grushin":
        base = _grushin_base(args)
        config.update(alpha=args.alpha, base=[base.x0, base.y0])
        state = grushin_exp(base, cov, args.t)
        position = dict(zip(("x", "y"), state.position))
        momentum = dict(zip(("u", "v"), state.momentum))
    elif args.structure == "su2":
        point, mom = su2_exp(cov, args.t)
        position = {"alpha_re": point.alpha_re, "alpha_im": point.alpha_im,
                    "beta_re": point.beta_re, "beta_im": point.beta_im}
        momentum = dict(zip(("u", "v", "w"), mom))
    else:
        point, mom = sl2_exp(cov, args.t)
        position = {"m11": point.m11, "m12": point.m12,
                    "m21": point.m21, "m22": point.m22}
        momentum = dict(zip(("u", "v", "w"), mom))
    position = {k: round12(v) for k, v in position.items()}
    momentum = {k: round12(v) for k, v in momentum.items()}
    if args.format == "json":
        payload = {"config": config,
                   "results": {"position": position, "momentum": momentum},
                   "versions": _versions(), "tolerances": {}}
        text = json.dumps(payload, indent=2)
    elif args.format == "csv":
        lines = ["name,value"]
        lines += [f"{k},{_fmt(v)}" for k, v in (*position.items(), *momentum.items())]
        text = "\n".join(lines)
    else:
        lines = [f"{k} = {_fmt(v)}" for k, v in position.items()]
        lines += [f"{k} = {_fmt(v)}" for k, v in momentum.items()]
        text = "\n".join(lines)
    _emit(text, args.out)
    return 0


def _record_row(structure: str, rec) -> dict:
    kernel = [round12(k) for k in rec.kernel_basis[0]] if rec.kernel_basis else []
    fs = [round12(f) for f in rec.f_values]
    if structure == "grushin":
        k1, k2, k3 = (kernel + [None, None])[:2] + [None]
        f0, f1 = fs[0], None
    else:
        k1, k2, k3 = (kernel + [None, None, None])[:3]
        f0, f1 = fs[0], fs[1]
    return {"s": round12(rec.s), "stratum": rec.stratum, "order": rec.order,
            "class": rec.singularity_class.value,
            "k1": k1, "k2": k2, "k3": k3, "f0": f0, "f1": f1,
            "covector": [round12(c) for c in rec.covector]}


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return _fmt(value)
    return str(value)


def cmd_conj_scan(args) -> int:
    _check_structure_flags(args)
    dim = _fiber_dim(args.structure)
    directions = [_parse_floats(d, "direction", dim) for d in args.direction]
    if args.structure == "grushin":
        adapter = grushin_adapter(_grushin_base(args))
    elif args.structure == "su2":
        adapter = su2_adapter()
    else:
        adapter = sl2_adapter()

    def scan(direction: list[float]):
        return scan_ray(adapter, direction, args.s_max,
                        scan_points=args.scan_points, root_tol=args.root_tol)

    threads = max(1, int(os.environ.get("SRFOLDS_THREADS", "1")))
    if threads > 1 and len(directions) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            all_records = list(pool.map(scan, directions))
    else:
        all_records = [scan(d) for d in directions]

    config = {"command": "conj-scan", "structure": args.structure,
              "directions": directions, "s_max": args.s_max,
              "scan_points": args.scan_points, "root_tol": args.root_tol}
    if args.structure == "grushin":
        base = _grushin_base(args)
        config.update(alpha=args.alpha, base=[base.x0, base.y0])
    tolerances = {"root_tol": args.root_tol, "pairing_tol": PAIRING_TOL,
                  "second_order_tol": SECOND_ORDER_TOL,
                  "rank_tol_factor": DEFAULT_RANK_TOL_FACTOR}

    rows = [[_record_row(args.structure, rec) for rec in records]
            for records in all_records]
    if args.format == "json":
        results = [{"direction": d, "records": recs}
                   for d, recs in zip(directions, rows)]
        payload = {"config": config, "results": results,
                   "versions": _versions(), "tolerances": tolerances}
        text = json.dumps(payload, indent=2)
    elif args.format == "csv":
        lines = [CSV_HEADER]
        for recs in rows:
            for row in recs:
                lines.append(",".join(_csv_cell(row[key]) for key in
                                      ("s", "stratum", "order", "class",
                                       "k1", "k2", "k3", "f0", "f1")))
        text = "\n".join(lines)
    else:
        lines = []
        for direction, recs in zip(directions, rows):
            head = ",".join(_fmt(c) for c in direction)
            lines.append(f"direction {head}: {len(recs)} conjugate covector(s)")
            for row in recs:
                kern = ",".join(_fmt(row[k]) for k in ("k1", "k2", "k3")
                                if row[k] is not None)
                fvals = ",".join(_fmt(row[k]) for k in ("f0", "f1")
                                 if row[k] is not None)
                lines.append(f"  s={_fmt(row['s'])}  stratum={row['stratum']}  "
                             f"order={row['order']}  class={row['class']}  "
                             f"kernel=({kern})  f=({fvals})")
        text = "\n".join(lines)
    _emit(text, args.out)
    return 0


def cmd_selftest(args) -> int:
    results = run_selftest(seed=args.seed, tol=args.tol)
    _emit(format_report(results), args.out)
    return 0 if all(result.passed for result in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srfolds",
        description="Geodesics, conjugate loci, and fold/tangential "
                    "classification for the alpha-Grushin plane, SU(2), and SL(2).")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")
        p.add_argument("--out", default=None, help="write output to FILE")
        p.add_argument("--seed", type=int, default=0)

    def add_structure(p: argparse.ArgumentParser) -> None:
        p.add_argument("--structure", choices=("grushin", "su2", "sl2"),
                       required=True)
        p.add_argument("--alpha", type=float, default=None,
                       help="grushin exponent (alpha >= 1); grushin only")
        p.add_argument("--base", default="0,0",
                       help="grushin base point x0,y0 (groups start at identity)")

    p_exp = sub.add_parser("expmap", help="endpoint of a normal geodesic")
    add_structure(p_exp)
    p_exp.add_argument("--covector", required=True,
                       help="initial covector, comma-separated")
    p_exp.add_argument("--t", type=float, default=1.0)
    add_common(p_exp)
    p_exp.set_defaults(func=cmd_expmap)

    p_scan = sub.add_parser("conj-scan",
                            help="scan covector rays for conjugate points")
    add_structure(p_scan)
    p_scan.add_argument("--direction", action="append", required=True,
                        help="ray direction, comma-separated (repeatable)")
    p_scan.add_argument("--s-max", type=float, default=10.0)
    p_scan.add_argument("--scan-points", type=int, default=DEFAULT_SCAN_POINTS)
    p_scan.add_argument("--root-tol", type=float, default=DEFAULT_ROOT_TOL)
    add_common(p_scan)
    p_scan.set_defaults(func=cmd_conj_scan)

    p_self = sub.add_parser("selftest", help="run the verification battery")
    p_self.add_argument("--tol", type=float, default=None,
                        help="override every check threshold")
    add_common(p_self)
    p_self.set_defaults(func=cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except SrfoldsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
