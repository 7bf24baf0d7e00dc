"""Command-line entry point.

    qci [--seed S] run CONFIG [--format csv|json --out PATH]
    qci [--seed S] verify
    qci [--seed S] report --format csv|json --out PATH [--config CONFIG]

Exit status is 0 only when every scenario row is correct and every
diagram check commutes.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .harness import (
    default_config,
    emit_report,
    format_summary,
    load_config,
    run_suite,
    shipped_verifications,
)

U64_MAX = 2**64 - 1


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value <= U64_MAX:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 bits: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qci", description="Classical interface cost experiments for quantum computations."
    )
    parser.add_argument("--seed", type=_u64, default=0, help="base seed mixed into every scenario seed")
    parser.add_argument("--workers", type=int, default=None, help="scenario worker threads")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a suite config and print a summary")
    run.add_argument("config")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--out", help="also write the report here")

    sub.add_parser("verify", help="run the shipped commutativity checks")

    report = sub.add_parser("report", help="run a suite and write the report")
    report.add_argument("--format", choices=("csv", "json"), required=True)
    report.add_argument("--out", required=True)
    report.add_argument("--config", help="suite config (default: the shipped suite)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)

    if args.command == "verify":
        ok = True
        for name, verdict in shipped_verifications(args.seed):
            ok &= verdict.commutes
            status = "commutes" if verdict.commutes else "FAILS"
            print(f"{status:<9} {name} {verdict.detail}".rstrip())
        return 0 if ok else 1

    config = load_config(args.config) if args.config else default_config()
    report = run_suite(config, base_seed=args.seed, workers=args.workers)
    print(format_summary(report))
    if args.out:
        path = emit_report(report, args.format, args.out)
        print(f"wrote {path}")
    return 0 if report.all_correct else 1


if __name__ == "__main__":
    sys.exit(main())
