"""permkit command line: permanents, identity verification, estimation, sampling.

All results go to standard output as JSON (full double precision); errors go
to standard error.  Exit codes: 0 success, 1 input/usage error, 2 at least
one identity verification failed.  Every invocation embeds a manifest
(command, parameters, seed, version, wall time); seeded commands reproduce
their output exactly when replayed with the same inputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .bosonic import (
    OVERFLOW,
    CatInputSpec,
    bs_distribution,
    cat_distribution,
    photon_fraction,
    reject_to_fixed_n,
    amplitude_regime_check,
    sample as sample_outcomes,
    tv_distance,
)
from .combinatorics import RepetitionPattern, repeat_matrix, weight
from .errors import PermkitError
from .estimators import estimate_permanent, estimator_variance_scan
from .identities import IDENTITY_REGISTRY, run_battery
from .numerics import ComplexMatrix, UnitaryMatrix
from .permanents import (
    permanent_cauchy_binet,
    permanent_glynn,
    permanent_glynn_kan,
    permanent_glynn_kan_repeated,
    permanent_glynn_repeated_rows,
    permanent_naive,
    permanent_roots_of_unity,
    permanent_ryser,
)

PLAIN_ALGOS = {
    "naive": permanent_naive,
    "ryser": permanent_ryser,
    "glynn": permanent_glynn,
    "glynn-kan": permanent_glynn_kan,
}
PATTERN_ALGOS = {
    "glynn-repeated-rows": permanent_glynn_repeated_rows,
    "roots-of-unity": permanent_roots_of_unity,
    "glynn-kan-repeated": permanent_glynn_kan_repeated,
    "cauchy-binet": permanent_cauchy_binet,
}


def _load_json(arg: str):
    text = arg.strip()
    if text.startswith("[") or text.startswith("{"):
        return json.loads(text)
    with open(arg, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_matrix(arg: str) -> ComplexMatrix:
    return ComplexMatrix.from_json_dict(_load_json(arg))


def _load_multi_index(arg: str) -> tuple[int, ...]:
    data = _load_json(arg)
    return tuple(int(k) for k in data)


def _parse_cap(text: str):
    if "," in text:
        return tuple(int(c) for c in text.split(","))
    return int(text)


def _parse_complex(text: str) -> complex:
    if "," in text:
        re_s, im_s = text.split(",")
        return complex(float(re_s), float(im_s))
    return complex(float(text), 0.0)


def _threads() -> int:
    env = os.environ.get("PERMKIT_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="permkit")
    parser.add_argument("--tolerance", type=float, default=1e-8, help="comparison tolerance")
    sub = parser.add_subparsers(dest="command", required=True)

    per = sub.add_parser("per", help="evaluate a permanent")
    per.add_argument("--algo", required=True, choices=sorted(PLAIN_ALGOS | PATTERN_ALGOS.keys()))
    per.add_argument("--matrix", required=True)
    per.add_argument("--matrix-b", help="second matrix (cauchy-binet)")
    per.add_argument("--rows", help="row repetition multi-index (JSON array or file)")
    per.add_argument("--cols", help="column repetition multi-index")

    verify = sub.add_parser("verify", help="verify permanent identities")
    group = verify.add_mutually_exclusive_group(required=True)
    group.add_argument("--identity", choices=sorted(IDENTITY_REGISTRY))
    group.add_argument("--all", action="store_true")
    verify.add_argument("--seed", type=int, default=7)
    verify.add_argument("--matrix")
    verify.add_argument("--matrix-b")
    verify.add_argument("--rows")
    verify.add_argument("--cols")
    verify.add_argument("--cap")

    est = sub.add_parser("estimate", help="Monte Carlo permanent estimate")
    est.add_argument("--matrix", required=True)
    est.add_argument("--rows", required=True)
    est.add_argument("--cols", required=True)
    est.add_argument("--f", default="pown", choices=("exp", "pown", "geom"))
    est.add_argument("--samples", type=int, default=100_000)
    est.add_argument("--seed", type=int, default=0)
    est.add_argument("--streams", type=int, default=1)

    smp = sub.add_parser("sample", help="sample a linear-optical outcome distribution")
    smp.add_argument("--unitary", required=True)
    smp.add_argument("--input", default="fock", choices=("fock", "cat"))
    smp.add_argument("--alpha", default="0.5", help="cat amplitude as re,im")
    smp.add_argument("--n", type=int, required=True, help="number of occupied input modes")
    smp.add_argument("--cutoff", type=int, help="max total photons enumerated (cat input)")
    smp.add_argument("--count", type=int, default=1000)
    smp.add_argument("--seed", type=int, default=0)
    smp.add_argument("--reject-to", type=int, dest="reject_to")

    rep = sub.add_parser("report", help="estimator variance scan / amplitude regime table")
    rep.add_argument("--kind", required=True, choices=("variance", "regime"))
    rep.add_argument("--matrix")
    rep.add_argument("--rows")
    rep.add_argument("--cols")
    rep.add_argument("--f", default="pown,exp,geom")
    rep.add_argument("--samples", type=int, default=100_000)
    rep.add_argument("--seed", type=int, default=0)
    rep.add_argument("--n", type=int)
    rep.add_argument("--m", type=int)
    rep.add_argument("--c", default="1.0", help="comma-separated scaling constants")

    return parser


def _manifest(args: argparse.Namespace, wall_ms: int) -> dict:
    params = {
        k: v
        for k, v in sorted(vars(args).items())
        if k != "command" and v is not None
    }
    return {
        "command": args.command,
        "parameters": params,
        "seed": int(getattr(args, "seed", 0) or 0),
        "tool_version": __version__,
        "wall_time_ms": wall_ms,
    }


def _cmd_per(args) -> tuple[object, int, list]:
    mat = _load_matrix(args.matrix)
    rows = _load_multi_index(args.rows) if args.rows else None
    cols = _load_multi_index(args.cols) if args.cols else None
    algo = args.algo
    if algo in PLAIN_ALGOS:
        target = mat
        if rows is not None or cols is not None:
            m = mat.dim
            pattern = RepetitionPattern(rows or (1,) * m, cols or (1,) * m)
            target = repeat_matrix(mat, pattern)
        result = PLAIN_ALGOS[algo](target)
    elif algo == "glynn-repeated-rows":
        q = rows if rows is not None else (1,) * mat.dim
        result = permanent_glynn_repeated_rows(mat, q)
    elif algo == "cauchy-binet":
        if not args.matrix_b:
            raise ValueError("cauchy-binet needs --matrix-b")
        mat_b = _load_matrix(args.matrix_b)
        pattern = RepetitionPattern(rows or (1,) * mat.dim, cols or (1,) * mat.dim)
        result = permanent_cauchy_binet(mat, mat_b, pattern)
    else:
        pattern = RepetitionPattern(rows or (1,) * mat.dim, cols or (1,) * mat.dim)
        result = PATTERN_ALGOS[algo](mat, pattern)
    value = complex(result.value)
    payload = {"re": value.real, "im": value.imag, "algo": result.algorithm, "terms": result.term_count}
    return payload, 0, []


def _cmd_verify(args, tolerance: float) -> tuple[object, int, list]:
    overrides = {}
    if args.matrix:
        overrides["matrix"] = _load_matrix(args.matrix).data
    if args.matrix_b:
        overrides["matrix_b"] = _load_matrix(args.matrix_b).data
    if args.rows:
        overrides["rows"] = _load_multi_index(args.rows)
    if args.cols:
        overrides["cols"] = _load_multi_index(args.cols)
    if args.cap:
        overrides["cap"] = _parse_cap(args.cap)
    if args.all and overrides:
        raise ValueError("--matrix/--rows/--cols/--cap overrides require --identity")
    names = None if args.all else [args.identity]
    reports = run_battery(names, seed=args.seed, tolerance=tolerance, max_workers=_threads(), **overrides)
    payload = [r.to_json_dict() for r in reports]
    code = 0 if all(r.passed for r in reports) else 2
    return payload, code, []


def _cmd_estimate(args) -> tuple[object, int, list]:
    mat = _load_matrix(args.matrix)
    pattern = RepetitionPattern(_load_multi_index(args.rows), _load_multi_index(args.cols))
    rep = estimate_permanent(mat, pattern, args.f, args.samples, args.seed, streams=args.streams)
    return rep.to_json_dict(), 0, []


def _outcome_line(outcome) -> dict:
    if outcome is OVERFLOW:
        return {"overflow": True}
    return {"counts": list(outcome)}


def _cmd_sample(args) -> tuple[object, int, list]:
    u = UnitaryMatrix(_load_matrix(args.unitary))
    if args.input == "fock":
        dist = bs_distribution(u, args.n)
        if args.reject_to is not None:
            dist = reject_to_fixed_n(dist, args.reject_to)
        draws = sample_outcomes(dist, args.count, args.seed)
        lines = [_outcome_line(o) for o in draws]
        summary = {
            "input": "fock",
            "count": args.count,
            "support_size": len(dist.probs),
            "truncated_mass": dist.truncated_mass,
        }
        return summary, 0, lines
    spec = CatInputSpec(_parse_complex(args.alpha), args.n, u.dim)
    dist = cat_distribution(u, spec, args.cutoff)
    draws = sample_outcomes(dist, args.count, args.seed)
    if args.reject_to is not None:
        n = args.reject_to
        kept = [o for o in draws if o is not OVERFLOW and weight(o) == n]
        lines = [_outcome_line(o) for o in kept]
        bs = bs_distribution(u, n)
        empirical: dict = {}
        if kept:
            inc = 1.0 / len(kept)
            for o in kept:
                empirical[o] = empirical.get(o, 0.0) + inc
        summary = {
            "input": "cat",
            "count": args.count,
            "kept": len(kept),
            "kept_fraction": len(kept) / args.count,
            "expected_fraction": photon_fraction(spec.alpha, n),
            "tv_estimate": tv_distance(empirical, bs.probs),
            "cutoff": dist.cutoff,
            "truncated_mass": dist.truncated_mass,
        }
        return summary, 0, lines
    lines = [_outcome_line(o) for o in draws]
    summary = {
        "input": "cat",
        "count": args.count,
        "support_size": len(dist.probs),
        "cutoff": dist.cutoff,
        "truncated_mass": dist.truncated_mass,
        "tail_bound": dist.tail_bound,
    }
    return summary, 0, lines


def _cmd_report(args) -> tuple[object, int, list]:
    if args.kind == "variance":
        if not (args.matrix and args.rows and args.cols):
            raise ValueError("variance report needs --matrix, --rows, --cols")
        mat = _load_matrix(args.matrix)
        pattern = RepetitionPattern(_load_multi_index(args.rows), _load_multi_index(args.cols))
        f_list = tuple(args.f.split(","))
        table = estimator_variance_scan(mat, pattern, f_list, args.samples, args.seed)
        return {"kind": "variance", "table": table}, 0, []
    if args.n is None or args.m is None:
        raise ValueError("regime report needs --n and --m")
    rows = []
    for c in (float(x) for x in args.c.split(",")):
        rows.append(amplitude_regime_check(args.n, args.m, c).to_json_dict())
    return {"kind": "regime", "table": rows}, 0, []


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; the exit-code contract reserves
        # 2 for verification failures, so misuse maps to 1.
        return 0 if exc.code == 0 else 1
    start = time.monotonic()
    try:
        if args.command == "per":
            payload, code, lines = _cmd_per(args)
        elif args.command == "verify":
            payload, code, lines = _cmd_verify(args, args.tolerance)
        elif args.command == "estimate":
            payload, code, lines = _cmd_estimate(args)
        elif args.command == "sample":
            payload, code, lines = _cmd_sample(args)
        else:
            payload, code, lines = _cmd_report(args)
    except (PermkitError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    wall_ms = int((time.monotonic() - start) * 1000)
    manifest = _manifest(args, wall_ms)
    for line in lines:
        print(json.dumps(line))
    if isinstance(payload, list):
        print(json.dumps({"reports": payload, "manifest": manifest}))
    else:
        payload = dict(payload)
        payload["manifest"] = manifest
        print(json.dumps(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
