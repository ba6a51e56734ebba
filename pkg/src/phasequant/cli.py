"""Command-line entry point for the verification harness.

Subcommands
-----------
``run``
    Execute one experiment from a JSON config and write its report.
``list``
    Print the experiment catalog.
``show-config``
    Print a commented JSON config template for one experiment.

Exit status: 0 when every check passes, 1 when any check fails, 2 on
configuration or runtime errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import harness
from .errors import PhasequantError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasequant",
        description="Run phase-space quantization verification experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment from a JSON config file")
    run.add_argument("--config", required=True, help="path to the JSON config")
    run.add_argument(
        "--out",
        default=None,
        help="report directory (default: config output_dir, else current directory)",
    )
    run.add_argument(
        "--format",
        choices=("json", "csv"),
        default=None,
        help="restrict report files to one format (default: write both)",
    )
    run.add_argument(
        "--tolerance-scale",
        type=float,
        default=1.0,
        metavar="R",
        help="multiply every pass/fail tolerance by R (default 1.0)",
    )

    sub.add_parser("list", help="list the experiment catalog")

    show = sub.add_parser(
        "show-config", help="print a commented JSON config template"
    )
    show.add_argument("experiment", help="experiment name (see `phasequant list`)")

    return parser


def _run(args: argparse.Namespace) -> int:
    config = harness.ExperimentConfig.from_file(args.config)
    report = harness.run_experiment(config, tolerance_scale=args.tolerance_scale)
    for line in report.summary_lines():
        print(line)
    out_dir = args.out or config.output_dir or "."
    paths = report.write(out_dir, format=args.format)
    for path in paths:
        print(f"wrote {path}")
    return 0 if report.passed else 1


def _list() -> int:
    for entry in harness.list_experiments():
        print(f"{entry.name:24s} {entry.description} [{entry.anchor}]")
    return 0


def _show_config(args: argparse.Namespace) -> int:
    template = harness.default_config(args.experiment)
    print(json.dumps(template, indent=2))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _run(args)
        if args.command == "list":
            return _list()
        return _show_config(args)
    except (PhasequantError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
