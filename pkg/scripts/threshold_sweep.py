#!/usr/bin/env python3
"""Sweep noise thresholds over dimension and report convergence to the limit.

Produces one row per dimension: local bound, quantum value, threshold,
and the remaining gaps to the large-d limits.  Useful for eyeballing
how fast the threshold approaches its infimum.

    python3 scripts/threshold_sweep.py --dimensions 2..64
    python3 scripts/threshold_sweep.py --dimensions 2..1000 --stride 10 --csv out.csv
"""

import argparse
import csv
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qudit_bell import (  # noqa: E402
    asymptotic_value,
    local_bound_cases,
    noise_threshold,
    quantum_value,
)


def parse_range(text: str) -> tuple[int, int]:
    if ".." in text:
        lo, _, hi = text.partition("..")
        return int(lo), int(hi)
    d = int(text)
    return d, d


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dimensions", default="2..32", help="range like 2..32")
    parser.add_argument("--stride", type=int, default=1)
    parser.add_argument("--csv", default=None, help="also write rows to this CSV file")
    args = parser.parse_args()

    lo, hi = parse_range(args.dimensions)
    limit_value = asymptotic_value()
    limit_threshold = 2.0 / limit_value

    rows = []
    print(f"{'d':>6} {'bound':>6} {'quantum':>12} {'threshold':>12} "
          f"{'value gap':>11} {'thr gap':>11}")
    for d in range(lo, hi + 1, args.stride):
        bound, _ = local_bound_cases(d)
        value = quantum_value(d)
        threshold = noise_threshold(d)
        value_gap = limit_value - value
        threshold_gap = threshold - limit_threshold
        rows.append((d, bound, value, threshold, value_gap, threshold_gap))
        print(f"{d:>6} {bound:>6g} {value:>12.8f} {threshold:>12.8f} "
              f"{value_gap:>11.2e} {threshold_gap:>11.2e}")
    print(f"{'limit':>6} {'':>6} {limit_value:>12.8f} {limit_threshold:>12.8f}")

    if args.csv:
        with open(args.csv, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(
                ["d", "local_bound", "quantum_value", "noise_threshold",
                 "value_gap_to_limit", "threshold_gap_to_limit"]
            )
            for row in rows:
                writer.writerow([repr(x) if isinstance(x, float) else x for x in row])
        print(f"wrote {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
