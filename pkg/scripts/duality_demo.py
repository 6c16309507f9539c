#!/usr/bin/env python3
"""Demonstrate the self-duality map on random points.

Prints the position and action variables before and after applying S and R
and the residuals of the defining identities (S^2 = sigma, R^2 = id,
S = f_beta^{-1} S_P f_beta).
"""

import argparse
import math

import numpy as np

from rsdual.coupling import Coupling
from rsdual.projective import involution, moment_J_full, projective_distance, random_point
from rsdual.reduction import action_variables, duality, mapclass_on_P


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--y", type=float, default=None, help="default pi/(2n)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--points", type=int, default=3)
    args = ap.parse_args()

    c = Coupling(args.n, args.y if args.y is not None else math.pi / (2 * args.n))
    rng = np.random.default_rng(args.seed)
    print(f"n = {c.n}, y = {c.y:.6f}, chi0 = {c.chi0:.6f}")

    for k in range(args.points):
        u = random_point(c, rng)
        su = duality("S", u, c)
        ru = duality("R", u, c)
        print(f"\npoint {k}:")
        print("  J(u)      =", np.round(moment_J_full(u, c)[: c.n - 1], 6))
        print("  XiK(u)    =", np.round(action_variables(u, c), 6))
        print("  J(Su)     =", np.round(moment_J_full(su, c)[: c.n - 1], 6))
        print("  XiK(Su)   =", np.round(action_variables(su, c), 6))
        print("  J(Ru)     =", np.round(moment_J_full(ru, c)[: c.n - 1], 6))
        r_sq = projective_distance(duality("S", su, c), involution("sigma", u))
        r_r = projective_distance(duality("R", ru, c), u)
        r_mc = projective_distance(mapclass_on_P(["S"], u, c), su)
        print(f"  |S^2 - sigma| = {r_sq:.2e}   |R^2 - id| = {r_r:.2e}   "
              f"|S_P-conjugate - S| = {r_mc:.2e}")


if __name__ == "__main__":
    main()
