#!/usr/bin/env python3
"""Trace the maximum-relevance frontier and a uniform random baseline.

Writes a long-form TSV (x, y, series) suitable for plotting.
"""

import argparse
import sys

import numpy as np

from relab import max_relevance_frontier, random_baseline


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument("--grid-points", type=int, default=60)
    parser.add_argument("--alphabets", type=int, nargs="+",
                        default=[2, 8, 32, 128, 512, 2048])
    parser.add_argument("--replicas", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", type=argparse.FileType("w"), default=sys.stdout)
    args = parser.parse_args()

    grid = np.geomspace(0.05, 20.0, args.grid_points)
    curve = max_relevance_frontier(args.n, grid)
    base = random_baseline(args.n, args.alphabets, args.replicas, args.seed)

    out = args.out
    out.write("resolution\trelevance\tseries\n")
    for p in curve.points:
        out.write(f"{p.resolution:.12g}\t{p.relevance:.12g}\tfrontier(mu={p.mu:.4g})\n")
    for p in base.points:
        out.write(f"{p.resolution:.12g}\t{p.relevance:.12g}\tuniform(A={p.alphabet_size})\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
