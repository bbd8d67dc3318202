"""Write a small gallery of SVG figures into a directory.

    python scripts/make_figures.py --out figures
"""

import argparse
import math
from pathlib import Path

from kepler_billiards import cli, sim
from kepler_billiards.foci import BilliardParams, r2_radius
from kepler_billiards.geometry import ConicWall, ParticleState, Vec2

WALL = ConicWall.ellipse(2.0, 1.0)


def gallery():
    R2 = r2_radius(2.0, 1.0, 4.0)
    # (name, R, start angle, orientation, steps)
    foci_cases = [
        ("nested_R5", 5.0, 0.3, sim.CCW, 60),
        ("two_periodic", R2, 0.7, sim.CCW, 4),
        ("four_periodic_R8", 8.0, math.pi, sim.CCW, 4),
        ("focal_limit_R6", 6.0, 0.5, sim.CW, 80),
        ("transversal_R7", 7.0, 2.0, sim.CCW, 40),
    ]
    for name, R, theta, ori, n in foci_cases:
        p = BilliardParams(WALL, 4.0, R)
        yield name, cli.foci_svg(p, sim.iterate_foci(p, Vec2.polar(R, theta), ori, n))
    traj = sim.simulate_physical(ParticleState(Vec2(0.0, 1.5), Vec2(0.0, 1.0), 4.0), WALL, 12)
    yield "physical_a4", cli.physical_svg(traj, 4.0)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, svg in gallery():
        (out / f"{name}.svg").write_text(svg)
        print(out / f"{name}.svg")


if __name__ == "__main__":
    main()
