"""Command-line front end.

Subcommands map one-to-one onto the library surface: verify (staged
derivation plus certificate), check (independent certificate
validation), classify / represent / hurwitz (number-theoretic kernels),
and search (constraint solver).  Every command takes --format text or
json; JSON output is one stable object per run.

Exit codes: 0 success or valid; 1 verification-negative (invalid
certificate, unforced or wrong values, derivation failure); 2 usage or
input errors.  TRISQUARES_BRANCH_CAP overrides the solver branch cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import certificate as cert_mod
from .replay import ReplayError, run_replay
from .solver import DEFAULT_BRANCH_CAP, BudgetExceeded, search
from .three_squares import (
    NonvanishingRepresentable,
    NotRepresentable,
    PureSquareOnly,
    TwoSquareOnly,
    classify,
    hurwitz_expected,
    representations,
    verify_hurwitz,
)

TABLE_PRINT_LIMIT = 100


def _emit(args, obj: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(obj, separators=(",", ":")))
    else:
        print(text)


def _branch_cap() -> int:
    raw = os.environ.get("TRISQUARES_BRANCH_CAP")
    if raw is None:
        return DEFAULT_BRANCH_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"TRISQUARES_BRANCH_CAP must be an integer, got {raw!r}")
    if cap < 1:
        raise ValueError("TRISQUARES_BRANCH_CAP must be positive")
    return cap


def _positive(value: int, name: str) -> int:
    if value < 1:
        raise ValueError(f"{name} must be at least 1, got {value}")
    return value


def _cmd_verify(args) -> int:
    run = run_replay(_positive(args.max, "--max"))
    lines = [f"f(n) = n verified for all n <= {run.bound}"]
    table_obj = None
    if run.bound <= TABLE_PRINT_LIMIT:
        lines.append(run.fn.format_table())
        table_obj = {str(n): str(v) for n, v in run.fn.items()}
    histogram = {k: run.histogram[k] for k in sorted(run.histogram)}
    lines.append("branches: " + ", ".join(f"{k}={v}" for k, v in histogram.items()))
    lines.append(f"certificate steps: {len(run.certificate.steps)}")
    if args.out:
        cert_mod.save(run.certificate, args.out)
        lines.append(f"certificate written to {args.out}")
    obj = {
        "bound": run.bound,
        "identity": True,
        "steps": len(run.certificate.steps),
        "histogram": histogram,
        "certificate": args.out,
    }
    if table_obj is not None:
        obj["table"] = table_obj
    _emit(args, obj, "\n".join(lines))
    return 0


def _cmd_check(args) -> int:
    try:
        cert = cert_mod.load(args.certificate)
    except cert_mod.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read {args.certificate}: {exc}", file=sys.stderr)
        return 2
    report = cert_mod.check(cert)
    if report.valid:
        text = f"valid: {report.steps_checked} steps, identity up to {report.bound}"
    else:
        where = "final table" if report.failure_index is None else f"step {report.failure_index}"
        text = f"INVALID at {where}: {report.failure_reason}"
    _emit(args, report.to_obj(), text)
    return 0 if report.valid else 1


def _cmd_classify(args) -> int:
    shape = classify(_positive(args.n, "n"))
    if isinstance(shape, NonvanishingRepresentable):
        a, b, c = shape.witness
        obj = {"n": args.n, "variant": "nonvanishing", "witness": [a, b, c]}
        text = f"nonvanishing representable: {a}^2+{b}^2+{c}^2"
    elif isinstance(shape, TwoSquareOnly):
        obj = {"n": args.n, "variant": "two_square", "a": shape.a, "b": shape.b}
        text = f"two squares only: {shape.a}^2+{shape.b}^2"
    elif isinstance(shape, PureSquareOnly):
        obj = {"n": args.n, "variant": "pure_square", "root": shape.root}
        text = f"pure square only: {shape.root}^2"
    else:
        assert isinstance(shape, NotRepresentable)
        obj = {"n": args.n, "variant": "not_representable", "s": shape.s, "t": shape.t}
        text = f"not representable: 4^{shape.s}*(8*{shape.t}+7)"
    _emit(args, obj, text)
    return 0


def _cmd_represent(args) -> int:
    reps = representations(_positive(args.n, "n"), nonvanishing=args.nonvanishing)
    obj = {
        "n": args.n,
        "nonvanishing": args.nonvanishing,
        "representations": [[r.a, r.b, r.c] for r in reps],
    }
    text = "\n".join(f"({r.a}, {r.b}, {r.c})" for r in reps) or "(none)"
    _emit(args, obj, text)
    return 0


def _cmd_hurwitz(args) -> int:
    _positive(args.max, "--max")
    found = verify_hurwitz(args.max)
    expected = hurwitz_expected(args.max)
    match = found == expected
    obj = {"limit": args.max, "found": found, "expected": expected, "match": match}
    lines = [" ".join(str(n) for n in found)]
    lines.append(
        "matches 4^s and 25*4^s exactly" if match else f"MISMATCH: expected {expected}"
    )
    _emit(args, obj, "\n".join(lines))
    return 0 if match else 1


def _cmd_search(args) -> int:
    report = search(args.horizon, report_bound=args.report, branch_cap=_branch_cap())
    forced_identity = all(report.forced.get(n) == n for n in range(1, args.report + 1))
    ok = not report.unforced and forced_identity
    text_lines = [
        f"horizon {report.horizon}, report bound {report.report_bound}: "
        f"{len(report.leaves)} leaves, {report.branches} branches, "
        f"{report.contradictions} contradictions"
    ]
    if ok:
        text_lines.append(f"all f(n), n <= {report.report_bound}, forced to n")
    else:
        bad = [n for n in report.forced if report.forced[n] != n]
        text_lines.append(f"unforced slots: {report.unforced}; non-identity forced: {bad}")
    _emit(args, report.to_obj(), "\n".join(text_lines))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trisquares",
        description=(
            "Derive and certify that a multiplicative function satisfying "
            "f(a^2+b^2+c^2) = f(a)^2+f(b)^2+f(c)^2 is the identity."
        ),
    )
    parser.add_argument(
        "--format", choices=("text", "json"), default="text", help="output format"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="derive f on 1..N and emit a certificate")
    p.add_argument("--max", type=int, default=10_000, metavar="N")
    p.add_argument("--out", metavar="PATH", help="write the certificate here")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("check", help="validate a certificate file")
    p.add_argument("certificate", metavar="CERT")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("classify", help="three-square classification of n")
    p.add_argument("n", type=int)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("represent", help="three-square representations of n")
    p.add_argument("n", type=int)
    p.add_argument("--nonvanishing", action="store_true", help="require parts >= 1")
    p.set_defaults(func=_cmd_represent)

    p = sub.add_parser("hurwitz", help="squares <= limit lacking nonzero triples")
    p.add_argument("--max", type=int, default=10_000, metavar="LIMIT")
    p.set_defaults(func=_cmd_hurwitz)

    p = sub.add_parser("search", help="independent constraint-solver search")
    p.add_argument("--horizon", type=int, default=200)
    p.add_argument("--report", type=int, default=None, metavar="N")
    p.set_defaults(func=_cmd_search)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "search" and args.report is None:
        args.report = args.horizon
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"search abandoned: {exc}", file=sys.stderr)
        return 1
    except ReplayError as exc:
        print(f"derivation failed: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
