#!/usr/bin/env python3
"""Run every cataloged experiment with its default configuration.

Writes one JSON + CSV report bundle per experiment and prints the combined
check summary.  Exits nonzero when any check fails, so the script doubles as
a batch regression gate:

    python3 scripts/run_all.py --out reports/ [--tolerance-scale 1.0]
"""

import argparse
import sys
from pathlib import Path

from phasequant import harness
from phasequant.errors import PhasequantError


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("reports"), help="report directory")
    parser.add_argument(
        "--tolerance-scale",
        type=float,
        default=1.0,
        metavar="R",
        help="multiply every pass/fail tolerance by R",
    )
    args = parser.parse_args(argv)

    failures = 0
    for entry in harness.list_experiments():
        config = harness.ExperimentConfig.from_dict(harness.default_config(entry.name))
        try:
            report = harness.run_experiment(config, tolerance_scale=args.tolerance_scale)
        except PhasequantError as exc:
            print(f"error: {entry.name}: {exc}", file=sys.stderr)
            return 2
        for line in report.summary_lines():
            print(line)
        written = report.write(args.out)
        print(f"  -> {', '.join(str(p) for p in written)}")
        failures += sum(1 for record in report.records if not record.passed)

    total = sum(len(harness.CHECK_NAMES[e.name]) for e in harness.list_experiments())
    print(f"{total - failures}/{total} checks passed")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
