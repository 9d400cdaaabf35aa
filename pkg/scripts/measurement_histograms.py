#!/usr/bin/env python3
"""Counting-register histograms for bases of different orders.

For each base the measured distribution is printed next to the ideal
peak positions k*2^t/r: an order-2 base puts all the mass on two
values, while larger orders spread it over r clusters and need far
more shots to read off. Defaults are desk-scale; larger-order bases
on bigger N (say N=93 with a=80, order 30) work but take minutes.

Example:
    python3 scripts/measurement_histograms.py            # N=21, a=8 and a=2
    python3 scripts/measurement_histograms.py 93 32 --shots 256
"""

import argparse
import sys

from mpshor.bench import format_histogram_table, histogram_report
from mpshor.mps import TruncationPolicy


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("n", type=int, nargs="?", default=21)
    ap.add_argument("bases", type=int, nargs="*", default=[8, 2])
    ap.add_argument("--shots", type=int, default=1024)
    ap.add_argument("--backend", choices=("mps", "dense"), default="mps")
    ap.add_argument("--chi-max", type=int, default=256)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    for a in args.bases:
        report = histogram_report(
            args.n,
            a,
            shots=args.shots,
            backend=args.backend,
            seed=args.seed,
            truncation=TruncationPolicy(chi_max=args.chi_max),
        )
        print(format_histogram_table(report))
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
