#!/usr/bin/env python3
"""Run every named reproduction experiment and print a one-line verdict each.

Writes the full report list as JSON when --json is given; exits nonzero if
any check fails.
"""

import argparse
import json
import sys

from ncgp.experiments import CHECKS


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", default=None, help="write all reports to this file")
    ap.add_argument("--lattice-n", type=int, default=5,
                    help="grid size for the lattice bound check")
    args = ap.parse_args()

    reports = []
    failed = 0
    for name in sorted(CHECKS):
        fn = CHECKS[name]
        report = fn(n=args.lattice_n) if name == "lattice-bound" else fn()
        reports.append(report.to_json())
        verdict = "PASS" if report.passed else "FAIL"
        print(f"{verdict}  {name:24s} claimed={report.claimed!r:>40} "
              f"computed={report.computed!r} ({report.runtime:.2f}s)")
        failed += not report.passed
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(reports, fh, indent=2, sort_keys=True)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
