#!/usr/bin/env python3
"""Optimal-machine curves and the random-energy phase diagram.

Part 1 prints the specific-heat curve of the 2^c toy machine and the
entropy-energy trade-off across mu.  Part 2 scans the clamped-state entropy
fraction H[s*]/(n_s ln 2) over (delta_s/delta_t, nu) and prints the
closed-form boundary nu*.
"""

import argparse
import sys

import numpy as np

from relab import rem_phase_diagram, specific_heat_curve
from relab.olm_rem import olm_entropy_energy_curve, pow2_spec


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--classes", type=int, default=20)
    parser.add_argument("--mu", type=float, default=1.0)
    parser.add_argument("--gamma", type=float, default=2.0)
    parser.add_argument("--ns", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    spec = pow2_spec(args.classes)
    heat = specific_heat_curve(spec, args.mu, args.mu * np.arange(0.5, 2.01, 0.1))
    peak = max(heat, key=lambda p: p[1])
    print(f"specific heat: peak C = {peak[1]:.3f} at beta'/beta = {peak[0]:.2f} "
          f"(mu = {args.mu})")
    curve = olm_entropy_energy_curve(spec, np.geomspace(0.3, 4.0, 25))
    print("resolution\tnoise")
    for res, noise in curve:
        print(f"{res:.4f}\t{noise:.4f}")

    diagram = rem_phase_diagram(
        gamma=args.gamma,
        ratio_grid=[0.5, 1.0, 2.0],
        nu_grid=[0.25, 0.5, 0.75, 1.0, 1.25],
        n_s=args.ns,
        seed=args.seed,
    )
    print("ratio\tnu\tH_fraction")
    for i, ratio in enumerate(diagram["ratios"]):
        for j, nu in enumerate(diagram["nus"]):
            print(f"{ratio:.2f}\t{nu:.2f}\t{diagram['h_fraction'][i, j]:.4f}")
    if diagram["nu_star"] is not None:
        stars = ", ".join(f"{v:.3f}" for v in diagram["nu_star"])
        print(f"# nu* per ratio: {stars}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
