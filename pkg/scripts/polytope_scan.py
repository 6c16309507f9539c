#!/usr/bin/env python3
"""Scan the images of the two toric moment maps.

Samples random phase-space points, records (J, Xi o K) pairs to CSV and
prints the empirical bounding box against the moment polytope
{ xi_j >= y, sum xi_j <= pi - y }.
"""

import argparse
import csv
import math

import numpy as np

from rsdual.coupling import Coupling
from rsdual.projective import moment_J_full, random_point, vertex_points
from rsdual.reduction import action_variables


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--y", type=float, default=None, help="default pi/(2n)")
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="polytope.csv")
    args = ap.parse_args()

    c = Coupling(args.n, args.y if args.y is not None else math.pi / (2 * args.n))
    rng = np.random.default_rng(args.seed)

    rows = []
    for _ in range(args.samples):
        u = random_point(c, rng)
        rows.append(
            np.concatenate([moment_J_full(u, c)[: c.n - 1], action_variables(u, c)])
        )
    for u in vertex_points(c, eps=1e-4, rng=rng):
        rows.append(
            np.concatenate([moment_J_full(u, c)[: c.n - 1], action_variables(u, c)])
        )
    data = np.array(rows)

    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [f"J{k}" for k in range(1, c.n)] + [f"XiK{k}" for k in range(1, c.n)]
        )
        for row in data:
            writer.writerow([f"{x:.15g}" for x in row])

    m = c.n - 1
    print(f"wrote {len(data)} rows to {args.out}")
    print(f"polytope: xi_j >= {c.y:.6f}, sum xi_j <= {math.pi - c.y:.6f}")
    for label, block in (("J", data[:, :m]), ("XiK", data[:, m:])):
        print(
            f"{label:4s} min coord {block.min():.6f}  "
            f"max coord {block.max():.6f}  max sum {block.sum(axis=1).max():.6f}"
        )
        assert block.min() >= c.y - 1e-9
        assert block.sum(axis=1).max() <= math.pi - c.y + 1e-9


if __name__ == "__main__":
    main()
