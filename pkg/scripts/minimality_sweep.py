#!/usr/bin/env python3
"""Sweep the geodesic minimality probe over random unit directions and arc
lengths, and report the worst competitor margin per case as CSV."""

import argparse
import csv
import sys

import numpy as np

from flagfiber import bundle as bd
from flagfiber import finsler as fin


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dim", type=int, default=3)
    ap.add_argument("--rank", type=int, default=2)
    ap.add_argument("--directions", type=int, default=6)
    ap.add_argument("--competitors", type=int, default=60)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--metric", choices=["finsler", "quotient"], default="finsler")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    pt = bd.random_point(rng, args.dim, args.rank)
    times = (0.2, 0.8, np.pi / 2) if args.metric == "finsler" \
        else (0.2, np.pi / 4 - 0.02)

    writer = csv.writer(sys.stdout)
    writer.writerow(["direction", "t", "geodesic_length",
                     "min_competitor_length", "margin", "violation"])
    for k in range(args.directions):
        v = bd.random_tangent(rng, pt)
        if args.metric == "finsler":
            v = (1.0 / fin.finsler_norm(pt, v)) * v
        else:
            from flagfiber import riemann as rm
            from flagfiber import operator_core as oc
            v = (1.0 / oc.frobenius_norm(rm.horizontal_lift_kappa(pt, v).matrix())) * v
        for t in times:
            rep = fin.minimality_probe(pt, v, t, args.competitors,
                                       seed=args.seed * 1000 + k, metric=args.metric)
            writer.writerow([
                k, f"{t:.6f}", f"{rep['geodesic_length']:.9f}",
                f"{rep['min_competitor_length']:.9f}",
                f"{rep['min_competitor_length'] - rep['geodesic_length']:.3e}",
                rep["violation"],
            ])
    return 0


if __name__ == "__main__":
    sys.exit(main())
