"""Command-line frontend: regularity checks, atlas verification, determinants.

Every subcommand prints a report (human-readable by default, JSON with
--json).  JSON reports are byte-stable for a fixed seed and flag set.

Exit codes: 0 all checks passed, 1 a mathematical check failed, 2 bad usage
or malformed input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from importlib import metadata

from .errors import (
    ArityError,
    ExprSyntaxError,
    FreenessViolation,
    HypersliceError,
    SingularMatrixError,
)
from .expr import compile_expr
from .manifolds import (
    affine_quotient_atlas,
    blowup_atlas,
    grassmann_counterexample,
    hp_atlas,
    verify_atlas,
)
from .qmat import AffineMap, QMatN, detN, qmatn_identity, qmatn_inverse
from .quat import I, J, K, ONE
from .stem import CircularSampler, Tolerances, classify

SCHEMA = "hyperslice/report-v1"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _version() -> str:
    try:
        return metadata.version("hyperslice")
    except metadata.PackageNotFoundError:
        return "0.0.0"


def _default_seed() -> int:
    env = os.environ.get("HYPERSLICE_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise SystemExit(EXIT_USAGE)


def _envelope(command: str, seed: int, inputs: dict, results: dict, timing: bool, t0: float) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "version": _version(),
        "seed": seed,
        "inputs": inputs,
        "results": results,
        # Wall time breaks byte-for-byte reproducibility, so it is opt-in.
        "wall_time": time.monotonic() - t0 if timing else None,
    }


def _emit(envelope: dict, as_json: bool, human: str) -> None:
    if as_json:
        print(json.dumps(envelope, sort_keys=True, separators=(",", ": "), indent=2))
    else:
        print(human)


def _tolerances(args) -> Tolerances:
    return Tolerances(step=args.step, accept=args.tol_ok, reject=args.tol_bad)


def run_check(args) -> int:
    t0 = time.monotonic()
    seed = args.seed
    try:
        func = compile_expr(args.expr, args.n)
    except (ExprSyntaxError, ArityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    tol = _tolerances(args)
    sampler = CircularSampler(func.n, seed=seed)
    verdict = classify(func, sampler, samples=args.samples, tol=tol)

    inputs = {
        "expr": args.expr,
        "n": func.n,
        "side": args.side,
        "samples": args.samples,
        "step": args.step,
        "tol_ok": args.tol_ok,
        "tol_bad": args.tol_bad,
    }
    envelope = _envelope("check", seed, inputs, verdict.to_json(), args.timing, t0)
    human = (
        f"{args.expr}  [n={func.n}, samples={args.samples}, seed={seed}]\n"
        f"  classification: {verdict.classification}\n"
        f"  left residual:  {verdict.left_residual:.3e} ({verdict.left_state})\n"
        f"  right residual: {verdict.right_residual:.3e} ({verdict.right_state})"
    )
    _emit(envelope, args.json, human)

    if args.side == "left":
        ok = verdict.left_ok
    elif args.side == "right":
        ok = verdict.right_ok
    else:
        ok = verdict.regular
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _torus_generators() -> list[AffineMap]:
    eye = qmatn_identity(1)
    return [AffineMap(eye, (b,)) for b in (ONE, I, J, K)]


def run_atlas(args) -> int:
    t0 = time.monotonic()
    seed = args.seed
    tol = _tolerances(args)
    inputs = {"model": args.model, "dim": args.dim, "samples": args.samples}

    if args.model == "grassmann24":
        report = grassmann_counterexample(samples=args.samples, seed=seed, tol=tol)
        results = report.to_json()
        # Expected-failure model: success means the defect is exhibited.
        ok = report.has_neither
        labels = ", ".join(v.classification for v in report.verdicts)
        human = (
            f"grassmann24 transition components: {labels}\n"
            f"  non-regular component found: {report.has_neither}"
        )
    else:
        if args.model == "hp":
            atlas = hp_atlas(args.dim)
        elif args.model == "blowup":
            atlas = blowup_atlas(max(args.dim, 2))
        elif args.model == "torus":
            atlas, _free = affine_quotient_atlas(
                _torus_generators(),
                labels=["t1", "ti", "tj", "tk"],
                word_len=3,
                seed=seed,
            )
        else:  # pragma: no cover - argparse restricts choices
            return EXIT_USAGE
        report = verify_atlas(
            atlas,
            samples=args.samples,
            seed=seed,
            classify_samples=args.classify_samples,
            tol=tol,
        )
        results = report.to_json()
        ok = report.passed
        human = (
            f"atlas {atlas.name}: {len(atlas.charts)} charts\n"
            f"  max pair residual:   {report.max_pair_residual:.3e}\n"
            f"  max cocycle residual: {report.max_triple_residual:.3e}\n"
            f"  transitions regular: {report.all_components_regular}\n"
            f"  passed: {report.passed}"
        )

    envelope = _envelope("atlas", seed, inputs, results, args.timing, t0)
    _emit(envelope, args.json, human)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _load_matrix(path: str) -> QMatN:
    with open(path, "r", encoding="utf-8") as fh:
        return QMatN.from_json(json.load(fh))


def run_det(args) -> int:
    t0 = time.monotonic()
    try:
        m = _load_matrix(args.file)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    value = detN(m)
    envelope = _envelope(
        "det", args.seed, {"file": args.file, "n": m.n}, {"det": value}, args.timing, t0
    )
    _emit(envelope, args.json, f"{value!r}")
    return EXIT_OK


def run_inv(args) -> int:
    t0 = time.monotonic()
    try:
        m = _load_matrix(args.file)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        inv = qmatn_inverse(m)
    except SingularMatrixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    envelope = _envelope(
        "inv", args.seed, {"file": args.file, "n": m.n}, {"inverse": inv.to_json()}, args.timing, t0
    )
    _emit(envelope, args.json, json.dumps(inv.to_json(), sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperslice",
        description="Slice regularity checks and chart verification over the quaternions.",
    )
    parser.add_argument("--version", action="version", version=_version())
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None, help="RNG seed (fallback: HYPERSLICE_SEED, then 0)")
        p.add_argument("--samples", type=int, default=100)
        p.add_argument("--step", type=float, default=1e-5, help="finite-difference step")
        p.add_argument("--tol-ok", type=float, default=1e-5, dest="tol_ok")
        p.add_argument("--tol-bad", type=float, default=1e-2, dest="tol_bad")
        p.add_argument("--json", action="store_true")
        p.add_argument("--timing", action="store_true", help="include wall time in the report")

    p_check = sub.add_parser("check", help="classify an expression's slice regularity")
    p_check.add_argument("--expr", required=True)
    p_check.add_argument("--n", type=int, default=None, help="number of variables (default: inferred)")
    p_check.add_argument("--side", choices=["left", "right", "both"], default="both")
    common(p_check)
    p_check.set_defaults(func=run_check)

    p_atlas = sub.add_parser("atlas", help="verify a model atlas")
    p_atlas.add_argument("--model", choices=["hp", "blowup", "grassmann24", "torus"], required=True)
    p_atlas.add_argument("--dim", type=int, default=2)
    p_atlas.add_argument("--classify-samples", type=int, default=15, dest="classify_samples")
    common(p_atlas)
    p_atlas.set_defaults(func=run_atlas)

    p_det = sub.add_parser("det", help="Dieudonne-style determinant of a matrix file")
    p_det.add_argument("--file", required=True)
    common(p_det)
    p_det.set_defaults(func=run_det)

    p_inv = sub.add_parser("inv", help="inverse of a matrix file")
    p_inv.add_argument("--file", required=True)
    common(p_inv)
    p_inv.set_defaults(func=run_inv)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = _default_seed()
    if args.samples < 1:
        parser.error("--samples must be positive")
    try:
        return args.func(args)
    except FreenessViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except HypersliceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
