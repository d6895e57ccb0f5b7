#!/usr/bin/env python3
"""Sample the ambient/quotient norm ratio across dimensions and print how
close the sampled extremes come to the sharp constants 1/sqrt(2) and
sqrt(3/2)."""

import argparse
import sys

import numpy as np

from flagfiber import bundle as bd
from flagfiber import operator_core as oc
from flagfiber import riemann as rm


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", type=int, nargs="+", default=[3, 4, 6, 8])
    ap.add_argument("--samples", type=int, default=400)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    lo, hi = 1.0 / np.sqrt(2.0), np.sqrt(1.5)
    print(f"sharp constants: {lo:.12f} .. {hi:.12f}")
    print(f"{'dim':>4} {'min_ratio':>16} {'max_ratio':>16} {'lo_gap':>10} {'hi_gap':>10}")
    for dim in args.dims:
        rng = np.random.default_rng(args.seed + dim)
        ratios = []
        for _ in range(args.samples):
            pt = bd.random_point(rng, dim, int(rng.integers(1, dim)))
            hv = rm.random_horizontal(rng, pt)
            vq = rm.metric_norm_blocks(hv, "quotient")
            if vq > 0.0:
                ratios.append(rm.metric_norm_blocks(hv, "ambient") / vq)
        # designed extremal directions, when the point admits them
        pt = bd.random_point(rng, dim, max(2, dim // 2))
        frame = oc.adapted_frame(pt.p, pt.f)
        dof = rm.HorizontalVector.dof(frame)
        for slot in (1, 1 + 2 * frame.dims[1]):
            theta = np.zeros(dof)
            theta[slot] = 1.0
            hv = rm.HorizontalVector.from_vector(theta, frame)
            vq = rm.metric_norm_blocks(hv, "quotient")
            if vq > 0.0:
                ratios.append(rm.metric_norm_blocks(hv, "ambient") / vq)
        print(f"{dim:>4} {min(ratios):>16.12f} {max(ratios):>16.12f} "
              f"{min(ratios) - lo:>10.2e} {hi - max(ratios):>10.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
