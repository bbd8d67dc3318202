"""Radii carrying 3-periodic foci orbits as a function of the orbit semi-axis a.

    python scripts/three_periodic_sweep.py --a-min 1.6 --a-max 8 --count 30
"""

import argparse
import sys

import numpy as np

from kepler_billiards import cayley
from kepler_billiards.geometry import ConicWall
from kepler_billiards.serialize import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--aK", type=float, default=2.0)
    ap.add_argument("--cK", type=float, default=1.0)
    ap.add_argument("--a-min", type=float, default=1.6)
    ap.add_argument("--a-max", type=float, default=8.0)
    ap.add_argument("--count", type=int, default=30)
    ap.add_argument("--grid", type=int, default=2000)
    args = ap.parse_args()

    wall = ConicWall.ellipse(args.aK, args.cK)
    rows = []
    for a in np.linspace(args.a_min, args.a_max, args.count):
        try:
            roots = cayley.find_periodic_R(wall, float(a), 3, grid_size=args.grid)
        except ValueError as exc:
            print(f"a={a:.6f}: {exc}", file=sys.stderr)
            continue
        if not roots:
            rows.append([float(a), None, None, None])
        for r in roots:
            rows.append([float(a), r.R, r.residual_before, r.closure_after])
    sys.stdout.write(write_csv(["a", "R", "normalized_residual", "closure"], rows))


if __name__ == "__main__":
    main()
