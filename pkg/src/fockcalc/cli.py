"""Command-line front end.

Subcommands: ``transform`` (coefficient-level symbol/kernel conversions),
``apply`` (kernel action on a series), ``verify`` (named identity suites
with JSON reports) and ``classify`` (space-hierarchy diagnostics).

Exit codes: 0 success, 1 verification failure, 2 I/O or schema error,
3 dimension mismatch, 4 precondition failure.  Errors are emitted as a
machine-readable JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .binomial import s0, t0, t0_star
from .errors import DimensionMismatch, DomainError, PreconditionError, SchemaError
from .serialize import load_coeffs, save_coeffs
from .series import KernelCoeffs
from .spaces import GrowthOrder, SpaceSpec, classify
from .symbolcalc import antiwick_to_wick, apply_operator, kernel_to_wick, wick_to_antiwick, wick_to_kernel
from .verify import SUITES, run_suite

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_SCHEMA = 2
EXIT_DIMENSION = 3
EXIT_PRECONDITION = 4

TRANSFORM_OPS = (
    "wick-to-kernel",
    "kernel-to-wick",
    "antiwick-to-wick",
    "wick-to-antiwick",
    "t0",
    "t0star",
    "s0",
)


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise ValueError(f"cannot parse complex flag {text!r}; expected 're' or 're,im'")


def _emit_error(code: int, kind: str, message: str) -> int:
    json.dump({"error": {"code": code, "kind": kind, "message": message}}, sys.stderr)
    sys.stderr.write("\n")
    return code


def _require_kernel(c) -> KernelCoeffs:
    if not isinstance(c, KernelCoeffs):
        raise PreconditionError("this operation requires a kernel coefficient file")
    return c


def cmd_transform(args: argparse.Namespace) -> int:
    c = _require_kernel(load_coeffs(args.input))
    t = _parse_complex(args.t) if args.t is not None else None
    deg = args.out_degree
    if args.op == "wick-to-kernel":
        out = wick_to_kernel(c, out_degree=deg)
    elif args.op == "kernel-to-wick":
        out = kernel_to_wick(c, out_degree=deg)
    elif args.op == "antiwick-to-wick":
        out = antiwick_to_wick(c)
    elif args.op == "wick-to-antiwick":
        out = wick_to_antiwick(c)
    elif args.op == "t0":
        if t is None:
            raise PreconditionError("--t is required for op t0")
        out = t0(c, t, out_degree=deg)
    elif args.op == "t0star":
        if t is None:
            raise PreconditionError("--t is required for op t0star")
        out = t0_star(c, t)
    else:
        out = s0(c)
    save_coeffs(out, args.output)
    return EXIT_OK


def cmd_apply(args: argparse.Namespace) -> int:
    K = _require_kernel(load_coeffs(args.kernel))
    F = load_coeffs(args.series)
    if isinstance(F, KernelCoeffs):
        raise PreconditionError("--series must point at a series coefficient file")
    out = apply_operator(K, F)
    save_coeffs(out, args.output)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    report = run_suite(args.suite, args.seed)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    status = "pass" if report["pass"] else "FAIL"
    print(f"[{args.suite}] {status}  cases={report['cases']}  max_error={report['max_error']:.3e}")
    if not report["pass"]:
        for rec in report["failures"][:5]:
            print(f"  failing case: {json.dumps(rec)}")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    c = _require_kernel(load_coeffs(args.input))
    s1 = GrowthOrder.parse(args.s1)
    s2 = GrowthOrder.parse(args.s2) if args.s2 is not None else s1
    space = SpaceSpec(args.family, s1, s2)
    grid = [float(x) for x in args.r_grid.split(",") if x.strip()]
    report = classify(c, space, grid)
    json.dump(report.to_jsonable(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("\n".join(report.csv_rows()) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockcalc",
        description="Coefficient-level operator calculus: conversions, composition, "
                    "diagnostics and numerical verification suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="apply a symbol/kernel transition to a coefficient file")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--output", "-o", required=True)
    p.add_argument("--op", required=True, choices=TRANSFORM_OPS)
    p.add_argument("--t", default=None, help="complex flag 're' or 're,im' (e.g. '0.5,0.3')")
    p.add_argument("--out-degree", type=int, default=None)
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("apply", help="apply a kernel operator to a series coefficient file")
    p.add_argument("--kernel", required=True)
    p.add_argument("--series", required=True)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(fn=cmd_apply)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", default=None, help="path for the JSON report")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("classify", help="space-hierarchy diagnostic for a kernel file")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--s1", required=True, help="growth order: real:<s>, flat:<sigma>, inf or zero")
    p.add_argument("--s2", default=None, help="defaults to --s1")
    p.add_argument("--r-grid", default="1,2,4")
    p.add_argument("--csv", default=None, help="optional CSV export of the fitted constants")
    p.set_defaults(fn=cmd_classify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SchemaError as exc:
        return _emit_error(EXIT_SCHEMA, "schema", str(exc))
    except (OSError, json.JSONDecodeError) as exc:
        return _emit_error(EXIT_SCHEMA, "io", str(exc))
    except DimensionMismatch as exc:
        return _emit_error(EXIT_DIMENSION, "dimension", str(exc))
    except (PreconditionError, DomainError, ValueError) as exc:
        return _emit_error(EXIT_PRECONDITION, "precondition", str(exc))


if __name__ == "__main__":
    sys.exit(main())
