"""Command-line front end.

Each command prints one JSON report on stdout and exits 0 only when every
certificate it computed passes.  Data files go to the path given by ``--out``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import numrange, prange
from .quaternion import MatrixFormatError, QuatMatrix, ShapeError
from .sdp import DEFAULT_EPS, SdpError, dual_norm_sdp, radius_sdp

EXIT_OK = 0
EXIT_CERT_FAILED = 1
EXIT_INPUT = 2
EXIT_SOLVER = 3

PRANGE_AGREEMENT = 1e-5


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _sdp_block(sol, eps: float) -> dict:
    return {
        "value": sol.value,
        "dual_value": sol.dual_value,
        "gap": sol.gap,
        "iterations": sol.iterations,
        "primal_lambda_min": sol.primal_lambda_min,
        "dual_lambda_min": sol.dual_lambda_min,
        "dual_residual": sol.dual_residual,
        "certified": sol.certified(eps),
    }


def _suffixed(out: Path, suffix: str) -> Path:
    return out.with_name(out.stem + suffix + out.suffix)


# ----------------------------------------------------------------------------
# commands: each returns (report body, all certificates passed)
# ----------------------------------------------------------------------------


def cmd_radius(a: QuatMatrix, args) -> tuple[dict, bool]:
    methods = ["sdp", "search", "sample"] if args.method == "all" else [args.method]
    values: dict[str, float] = {}
    body: dict = {"methods": methods}
    ok = True
    if "sdp" in methods:
        sol = radius_sdp(a, args.eps)
        body["sdp"] = _sdp_block(sol, args.eps)
        values["sdp"] = sol.value
        ok = ok and body["sdp"]["certified"]
    if "search" in methods:
        res = numrange.radius_eig_search(a, rng=args.seed)
        body["search"] = {
            "value": res.radius,
            "witness_value": res.lower_bound,
            "t_star": res.t_star.tolist(),
            "iterations": res.iterations,
            "lower_bound_only": True,
        }
        values["search"] = res.radius
    if "sample" in methods:
        val = numrange.sample_radius(a, args.samples, seed=args.seed)
        body["sample"] = {"value": val, "samples": args.samples, "lower_bound_only": True}
        values["sample"] = val
    if len(values) > 1:
        v = list(values.values())
        body["discrepancy"] = float(max(v) - min(v))
    body["values"] = values
    return body, ok


def cmd_dual(a: QuatMatrix, args) -> tuple[dict, bool]:
    sol = dual_norm_sdp(a, args.eps)
    block = _sdp_block(sol, args.eps)
    return {"sdp": block, "value": sol.value}, block["certified"]


def cmd_range(a: QuatMatrix, args) -> tuple[dict, bool]:
    if args.samples < 1 or args.directions < 1:
        raise ValueError("--samples and --directions must be at least 1")
    pts = numrange.sample_range(a, args.samples, seed=args.seed)
    dirs = numrange.sphere_directions(args.directions, np.random.default_rng(args.seed + 1))
    slabs = numrange.slab_fan(a, dirs)
    inside = np.ones(len(pts), dtype=bool)
    for s in slabs:
        inside &= s.contains(pts, tol=1e-8)
    body = {
        "samples": args.samples,
        "directions": args.directions,
        "contained_fraction": float(inside.mean()),
    }
    if args.out:
        out = Path(args.out)
        slab_path = _suffixed(out, "_slabs")
        numrange.write_samples_csv(out, pts)
        numrange.write_slabs_csv(slab_path, slabs)
        body["files"] = {"samples": str(out), "slabs": str(slab_path)}
    return body, bool(inside.all())


def cmd_prange(a: QuatMatrix, args) -> tuple[dict, bool]:
    c = prange.as_complex(a)
    sweep = prange.pradius_sweep(c)
    sol = prange.pradius_sdp(c, args.eps)
    pts = prange.sample_prange(c, args.samples, seed=args.seed)
    slabs = prange.prange_slabs(c, args.angles)
    th = np.array([s.theta for s in slabs])
    cmp = prange.compare_support(pts, th, np.array([s.lo for s in slabs]), np.array([s.hi for s in slabs]))
    disc = abs(sweep.value - sol.value)
    body = {
        "sweep": {"value": sweep.value, "theta": sweep.theta, "grid": sweep.grid},
        "sdp": _sdp_block(sol, args.eps),
        "discrepancy": disc,
        "sample_max_modulus": float(np.max(np.abs(pts))),
        "slab_violation": cmp.violation,
    }
    if args.out:
        out = Path(args.out)
        slab_path = _suffixed(out, "_slabs")
        prange.write_prange_samples_csv(out, pts)
        prange.write_prange_slabs_csv(slab_path, slabs)
        body["files"] = {"samples": str(out), "slabs": str(slab_path)}
    ok = body["sdp"]["certified"] and disc <= PRANGE_AGREEMENT and cmp.contained(1e-8)
    return body, ok


def cmd_project(a: QuatMatrix, args) -> tuple[dict, bool]:
    rep = prange.projection_check(a, samples=args.samples, angles=args.angles, seed=args.seed)
    return rep.to_dict(), rep.contained(1e-8)


def cmd_hull_experiment(a: QuatMatrix, args) -> tuple[dict, bool]:
    exp = prange.hull_experiment(prange.as_complex(a), samples=args.samples, angles=args.angles, seed=args.seed)
    body = exp.to_dict()
    body["note"] = "statistics only; no relation between the two sets is asserted"
    return body, True


COMMANDS = {
    "radius": cmd_radius,
    "dual": cmd_dual,
    "range": cmd_range,
    "prange": cmd_prange,
    "project": cmd_project,
    "prange-hull": cmd_hull_experiment,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qnumrange", description="Quaternion numerical range toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, samples: int):
        sp.add_argument("--input", required=True, help="matrix JSON file")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--samples", type=int, default=samples)
        sp.add_argument("--eps", type=float, default=DEFAULT_EPS)
        sp.add_argument("--out", default=None, help="CSV path for sampled points")
        sp.add_argument("-v", "--verbose", action="store_true")

    sp = sub.add_parser("radius", help="numerical radius r(A)")
    common(sp, 100_000)
    sp.add_argument("--method", choices=["sdp", "search", "sample", "all"], default="all")

    sp = sub.add_parser("dual", help="dual norm of r")
    common(sp, 0)

    sp = sub.add_parser("range", help="sample W(A) and its supporting slabs")
    common(sp, 10_000)
    sp.add_argument("--directions", type=int, default=64)

    for name, helptext in (
        ("prange", "pseudo-numerical range and radius of a complex matrix"),
        ("project", "check the two planar shadows of W(A)"),
        ("prange-hull", "compare co(W_pi(S)) with the range of Sh1 + i Sh2 (statistics only)"),
    ):
        sp = sub.add_parser(name, help=helptext)
        common(sp, 100_000 if name != "prange" else 10_000)
        sp.add_argument("--angles", type=int, default=72)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    path = Path(args.input)
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "input", "verbose")}
    report: dict = {"command": args.command, "input": str(path), "parameters": params}
    t0 = time.perf_counter()
    code = EXIT_OK
    try:
        report["input_sha256"] = _digest(path)
        a = QuatMatrix.load(path)
        body, ok = COMMANDS[args.command](a, args)
        report["result"] = body
        report["certificates_passed"] = ok
        code = EXIT_OK if ok else EXIT_CERT_FAILED
    except (OSError, MatrixFormatError, ShapeError, ValueError) as exc:
        report["error"] = f"{type(exc).__name__}: {exc}"
        code = EXIT_INPUT
    except (SdpError, ArithmeticError) as exc:
        report["error"] = f"{type(exc).__name__}: {exc}"
        code = EXIT_SOLVER
    report["wall_time_s"] = time.perf_counter() - t0
    print(json.dumps(report, indent=2, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
