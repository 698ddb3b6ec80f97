#!/usr/bin/env python3
"""Randomized verification of the Pythagoras sandwich for product distances
on seeded random unital spectral triples."""

import argparse
import json
import os
import sys

from ncgp.experiments import sweep_lemmas, sweep_theorem1


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=int(os.environ.get("NCGP_SEED", "0")))
    ap.add_argument("--tol", type=float, default=1e-4)
    ap.add_argument("--lemma-trials", type=int, default=1000)
    ap.add_argument("--json", default=None)
    args = ap.parse_args()

    thm = sweep_theorem1(trials=args.trials, seed=args.seed, tol=args.tol)
    print(f"theorem1: {thm.computed['violations']} violations over "
          f"{args.trials} trials ({thm.runtime:.1f}s) pass={thm.passed}")
    lem = sweep_lemmas(trials=args.lemma_trials, seed=args.seed)
    print(f"lemmas:   {lem.computed} ({lem.runtime:.1f}s) pass={lem.passed}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump([thm.to_json(), lem.to_json()], fh, indent=2, sort_keys=True)
    return 0 if (thm.passed and lem.passed) else 1


if __name__ == "__main__":
    sys.exit(main())
