"""Command-line front end: verify, converge, resolve.

Exit codes: 0 all checks pass, 1 an invariant failed, 2 the config (or
a flag) is invalid, 3 a numerical routine failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .errors import ConfigError, NumericalError, StructureError
from .experiments import (
    DEFAULT_TOLERANCES,
    parse_config,
    run_convergence,
    run_verification,
    summarize_convergence,
    summarize_verification,
)
from .model import assemble
from .propagators import resolvent_direct, resolvent_lu, spectral_point

__all__ = ["main", "build_parser", "parse_z"]


def parse_z(text: str) -> complex:
    """Parse a spectral point written as <re>+<im>i, e.g. 0+1i or 3-2i."""
    try:
        z = complex(text.strip().replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"cannot parse spectral point {text!r}; expected <re>+<im>i"
        ) from None
    return z


def _parse_tol(text: str) -> tuple:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(
            f"tolerance override {text!r} must look like name=value"
        )
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"tolerance value in {text!r} is not a number"
        ) from None


def _add_common(sub: argparse.ArgumentParser):
    sub.add_argument("--config", required=True, help="path to the JSON study config")
    sub.add_argument("--out", default=None, help="directory for report files")
    sub.add_argument("--z", action="append", type=parse_z, default=None,
                     metavar="<re>+<im>i",
                     help="evaluation point, repeatable; overrides the config")
    sub.add_argument("--tol", action="append", type=_parse_tol, default=None,
                     metavar="name=value", help="tolerance override, repeatable")
    sub.add_argument("--threads", type=int, default=1,
                     help="worker threads for independent evaluation points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinboson",
        description="truncated multi-spin-boson models: factorized resolvents, "
                    "invariant verification, cutoff-convergence studies",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    _add_common(subs.add_parser(
        "verify", help="run the invariant suite against the direct-solve oracle"))
    _add_common(subs.add_parser(
        "converge", help="run the cutoff-family convergence study"))
    _add_common(subs.add_parser(
        "resolve", help="compute and store resolvent matrices at the requested points"))
    return parser


def _apply_overrides(cfg, args):
    if args.z:
        pts = []
        for z in args.z:
            pts.append(spectral_point(z))
        cfg = replace(cfg, z_points=tuple(pts))
    if args.tol:
        merged = dict(cfg.tolerances)
        for name, value in args.tol:
            if name not in DEFAULT_TOLERANCES:
                raise ConfigError(
                    f"unknown tolerance {name!r}; known names are "
                    f"{sorted(DEFAULT_TOLERANCES)}"
                )
            if value <= 0:
                raise ConfigError(f"tolerance {name} must be positive, got {value}")
            merged[name] = value
        cfg = replace(cfg, tolerances=merged)
    if args.threads < 1:
        raise ConfigError(f"--threads must be at least 1, got {args.threads}")
    return cfg


def _run_resolve(cfg, out_dir, threads) -> int:
    blocked = assemble(cfg.model)
    tol = cfg.tolerances["oracle_rel"]
    entries = []
    worst = 0.0
    for i, z in enumerate(cfg.z_points):
        R = resolvent_lu(blocked, z)
        X, residual = resolvent_direct(blocked, z)
        gap = float(np.linalg.norm(R - X) / np.linalg.norm(X))
        worst = max(worst, gap)
        entry = {"z": [z.real, z.imag], "oracle_gap_rel": gap,
                 "direct_residual": residual, "dimension": blocked.dimension}
        if out_dir is not None:
            out = Path(out_dir)
            out.mkdir(parents=True, exist_ok=True)
            fname = out / f"resolvent_{i:03d}.npz"
            np.savez(fname, resolvent=R, z=np.array(z),
                     oracle_gap_rel=np.array(gap), direct_residual=np.array(residual))
            entry["file"] = fname.name
        entries.append(entry)
        print(f"z = {z}: dimension {blocked.dimension}, oracle gap {gap:.3e}, "
              f"direct residual {residual:.3e}")
    if out_dir is not None:
        summary = {"kind": "resolve", "entries": entries,
                   "tolerance_oracle_rel": tol}
        (Path(out_dir) / "resolve.json").write_text(
            json.dumps(summary, sort_keys=True, indent=2) + "\n")
    if worst > tol:
        print(f"FAIL: worst oracle gap {worst:.3e} exceeds {tol:.1e}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config)
        cfg = _apply_overrides(cfg, args)
        if args.command == "verify":
            report = run_verification(cfg, out_dir=args.out, threads=args.threads)
            print(summarize_verification(report))
            return 0 if report["passed"] else 1
        if args.command == "converge":
            report = run_convergence(cfg, out_dir=args.out, threads=args.threads)
            print(summarize_convergence(report))
            ok = all(blk["monotone_nonincreasing"] for blk in report["per_z"])
            if not ok:
                print("FAIL: resolvent gaps are not non-increasing", file=sys.stderr)
            return 0 if ok else 1
        return _run_resolve(cfg, args.out, args.threads)
    except StructureError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
