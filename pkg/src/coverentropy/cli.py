"""Command-line interface.

    coverentropy complexity --spec model.json --nmax 4
    coverentropy entropy    --spec golden.json --nmax 10 --format csv
    coverentropy mean       --spec rotation.json --epsilon 1/10
    coverentropy lowerbound --spec z.json --nmax 10
    coverentropy verify     report.json
    coverentropy example    rotation4 > rotation.json

Exit codes: 0 success, 2 invalid input, 3 resource cap hit, 4 verification
failure.  ``--threads`` never changes results, and ``--threads``/``--out``/
``--format`` are left out of the report so reports stay byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from pathlib import Path

from coverentropy import bundled
from coverentropy.errors import (
    CoverEntropyError,
    InvariantViolation,
    ResourceLimitError,
    VerificationError,
)
from coverentropy.exact import frac_str, to_fraction
from coverentropy.reports import (
    assemble,
    complexity_results,
    dumps,
    entropy_results,
    lowerbound_results,
    mean_results,
    to_csv,
)
from coverentropy.specfile import load_spec, read_json
from coverentropy.verify import verify_report

EXIT_OK, EXIT_VALIDATION, EXIT_RESOURCE, EXIT_VERIFY = 0, 2, 3, 4


def default_cap() -> int:
    return int(os.environ.get("COVERENTROPY_CAP", 10**6))


def _rational(text: str):
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError, TypeError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coverentropy",
                                description="Exact refinement complexity and entropy certificates.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, nmax_default: int, nmax_help: str = "largest ball radius"):
        sp.add_argument("--spec", required=True, help="spec file (JSON)")
        sp.add_argument("--nmax", type=_positive, default=nmax_default, help=nmax_help)
        sp.add_argument("--cap", type=_positive, default=None,
                        help="ball / pattern cap (default: $COVERENTROPY_CAP or 10^6)")
        sp.add_argument("--out", default=None, help="output file (default: stdout)")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--threads", type=_positive, default=1)
        sp.add_argument("--timing", action="store_true", help="add wall time (breaks byte-identity)")

    helps = {
        "complexity": "certified refinement complexity for n = 1..nmax",
        "entropy": "complexity plus log2(value)/n slopes",
    }
    for name, nmax in (("complexity", 4), ("entropy", 8)):
        sp = sub.add_parser(name, help=helps[name])
        common(sp, nmax)
        sp.add_argument("--cover", choices=("auto", "spec", "finest"), default="auto",
                        help="cover to refine (auto: the spec cover if given, else the finest)")
    sp = sub.add_parser("mean", help="almost invariant mean of a finite action")
    common(sp, 32, "largest radius tried for the growth ratio condition")
    sp.add_argument("--epsilon", type=_rational, required=True, help="defect bound, e.g. 1/10")
    sp = sub.add_parser("lowerbound", help="dual-ball witness: 2^n separated functionals")
    common(sp, 4, "number of functionals is 2^nmax")
    for name, text in (("verify", "re-check a report"),
                       ("verify-witness", "re-check a lowerbound report")):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("report")
    sp = sub.add_parser("example", help="print a bundled spec")
    sp.add_argument("name", choices=bundled.names())
    return p


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    target = Path(out)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=".tmp-", suffix=target.suffix)
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, target)


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "example":
        sys.stdout.write(json.dumps(bundled.get(args.name), indent=1, sort_keys=True) + "\n")
        return EXIT_OK
    if args.command in ("verify", "verify-witness"):
        report = read_json(args.report)
        if args.command == "verify-witness" and not (
                isinstance(report, dict) and report.get("command", {}).get("name") == "lowerbound"):
            raise VerificationError("not a dual-ball witness report")
        result = verify_report(report)
        print(f"PASS {len(result.checks)} checks")
        for note in result.notes:
            print(f"note: {note}")
        return EXIT_OK

    cap = args.cap if args.cap is not None else default_cap()
    raw = read_json(args.spec)
    spec = load_spec(raw, cap=cap)
    start = time.perf_counter()
    command = {"name": args.command, "nmax": args.nmax, "cap": cap}
    if args.command == "complexity":
        command["cover"] = args.cover
        res, diag = complexity_results(spec, args.nmax, args.cover, args.threads, cap)
    elif args.command == "entropy":
        command["cover"] = args.cover
        res, diag = entropy_results(spec, args.nmax, args.cover, args.threads, cap)
    elif args.command == "mean":
        command = {"name": "mean", "epsilon": frac_str(args.epsilon), "n_cap": args.nmax, "cap": cap}
        res, diag = mean_results(spec, args.epsilon, n_cap=args.nmax)
    else:
        command = {"name": "lowerbound", "n": args.nmax, "cap": cap}
        res, diag = lowerbound_results(spec, args.nmax, args.threads)
    wall = time.perf_counter() - start if args.timing else None
    report = assemble(command, raw, res, diag, wall)
    _write(to_csv(report) if args.format == "csv" else dumps(report), args.out)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        return run(argv)
    except (VerificationError, InvariantViolation) as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except CoverEntropyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
