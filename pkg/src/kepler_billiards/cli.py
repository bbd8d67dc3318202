"""Command-line front end: ``analyze``, ``simulate`` and ``search-periodic``.

Exit codes: 0 success, 2 inadmissible parameters, 3 numerical failure,
64 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import __version__, cayley, elliptic, foci, sim
from .config import Tolerances, get_tolerances, tolerances
from .errors import BilliardError, SingularPencilError, ZeroA0Error
from .geometry import ConicWall, Vec2, WallKind, second_focus
from .serialize import SvgScene, dumps, write_csv

EXIT_OK, EXIT_INADMISSIBLE, EXIT_NUMERICAL, EXIT_USAGE = 0, 2, 3, 64

FOCI_HEADER = ("i", "fx", "fy", "chord_phi", "chord_k")
PHYSICAL_HEADER = ("i", "phi", "px", "py", "ux", "uy", "f2x", "f2y")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    tolerances: Tolerances = field(default_factory=get_tolerances)
    grid: int = 2000
    out: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.format not in ("json", "csv", "svg"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.grid < 1:
            raise UsageError("grid must be positive")


# -- analysis report ------------------------------------------------------------


@dataclass
class AnalysisReport:
    params: dict
    admissible: bool
    scenario: foci.ScenarioClass
    caustic: dict | None = None
    pencil: dict | None = None
    weierstrass: dict | None = None
    realform: elliptic.RealFormClass | None = None
    periods: dict | None = None
    residuals: dict = field(default_factory=dict)
    failure: str | None = None

    def to_dict(self) -> dict:
        d = {
            "params": self.params,
            "admissible": self.admissible,
            "scenario": self.scenario,
            "caustic": self.caustic,
            "pencil": self.pencil,
            "weierstrass": self.weierstrass,
            "realform": self.realform,
            "periods": self.periods,
            "residuals": self.residuals,
        }
        if self.failure is not None:
            d["failure"] = self.failure
        return d


def build_report(params: foci.BilliardParams, nmax: int = 8) -> AnalysisReport:
    ok = foci.admissible(params)
    rep = AnalysisReport(
        {"aK": params.aK, "cK": params.cK, "a": params.a, "R": params.R},
        ok,
        foci.classify(params),
    )
    if not ok:
        return rep
    cd = foci.params_caustic(params)
    rep.caustic = {"x0": cd.x0, "r0": cd.r0}
    rep.realform = elliptic.real_form(params)
    try:
        pc = elliptic.pencil(cd.x0, cd.r0, params.R)
    except SingularPencilError as exc:
        rep.pencil = {"omitted": True, "reason": exc.degeneracy}
        rep.periods = {"omitted": True, "reason": exc.degeneracy}
        return rep
    rep.pencil = {"t1": pc.t1, "t2": pc.t2, "delta": pc.delta}
    wc = elliptic.weierstrass(pc)
    rep.weierstrass = {"g2": wc.g2, "g3": wc.g3, "e": list(wc.roots)}
    if rep.realform is elliptic.RealFormClass.PINCHED:
        rep.periods = {"omitted": True, "reason": "singular curve"}
    else:
        try:
            pd = elliptic.shift_and_frequency(wc, pc)
        except BilliardError as exc:
            rep.failure = f"{type(exc).__name__}: {exc}"
            rep.periods = {"omitted": True, "reason": "quadrature failure"}
        else:
            rep.periods = {
                "omega1": pd.omega1,
                "omega2_re": pd.omega2.real,
                "omega2_im": pd.omega2.imag,
                "xi": pd.xi,
                "nu": pd.nu,
            }
    for n in range(3, nmax + 1):
        try:
            rep.residuals[str(n)] = cayley.residual_at(params, n).value
        except ZeroA0Error:
            rep.residuals[str(n)] = None
    return rep


# -- simulation output ----------------------------------------------------------


def foci_rows(orbit: sim.FociOrbit) -> list[list[Any]]:
    rows = []
    for i, p in enumerate(orbit.points):
        if i == 0:
            rows.append([0, p.x, p.y, None, None])
        else:
            c = orbit.chords[i - 1]
            rows.append([i, p.x, p.y, c.phi, c.k])
    return rows


def physical_rows(traj: sim.BilliardTrajectory) -> list[list[Any]]:
    F = traj.wall.F
    rows = []
    for i, (s, phi) in enumerate(zip(traj.states, traj.phis)):
        f2 = second_focus(s, F)
        rows.append([i, phi, s.p.x, s.p.y, s.u.x, s.u.y, f2.x, f2.y])
    return rows


def _error_trailer(tag: str) -> list[str]:
    name, _, rest = tag.partition(" ")
    return ["#error", name, rest]


def kepler_arc(F: Vec2, f2: Vec2, a: float, p: Vec2, q: Vec2, spin: float, samples: int = 48):
    """Points of the orbit ellipse from ``p`` to ``q`` in the direction of motion."""
    axis = F - f2
    e = axis.norm() / (2.0 * a)
    th_p = math.atan2(axis.y, axis.x) if axis.norm() > 0 else 0.0
    slr = a * (1.0 - e * e)
    t0 = math.atan2((p - F).y, (p - F).x)
    t1 = math.atan2((q - F).y, (q - F).x)
    sweep = (t1 - t0) % (2.0 * math.pi)
    if spin < 0:
        sweep -= 2.0 * math.pi
    pts = []
    for j in range(samples + 1):
        t = t0 + sweep * j / samples
        r = slr / (1.0 + e * math.cos(t - th_p))
        pts.append((F.x + r * math.cos(t), F.y + r * math.sin(t)))
    pts[0], pts[-1] = (p.x, p.y), (q.x, q.y)
    return pts


def _draw_wall(scene: SvgScene, wall: ConicWall, extent: float):
    if wall.kind is WallKind.ELLIPSE:
        b = math.sqrt(wall.aK**2 - wall.cK**2)
        scene.ellipse(-wall.cK, 0.0, wall.aK, b, stroke="black")
    else:
        from .geometry import wall_point

        pts = []
        for j in range(241):
            v = wall_point(wall, -3.0 + 6.0 * j / 240)
            if v.norm() <= extent:
                pts.append((v.x, v.y))
        scene.path(pts, stroke="black")


def foci_svg(params: foci.BilliardParams, orbit: sim.FociOrbit) -> str:
    scene = SvgScene()
    _draw_wall(scene, params.wall, 0.0)
    scene.circle(0.0, 0.0, params.R, stroke="steelblue")
    cd = foci.params_caustic(params)
    scene.circle(cd.x0, 0.0, abs(cd.r0), stroke="darkorange")
    for p, q in zip(orbit.points[:-1], orbit.points[1:]):
        scene.line(p, q, stroke="gray")
    return scene.render()


def physical_svg(traj: sim.BilliardTrajectory, a: float) -> str:
    wall = traj.wall
    F = wall.F
    foci_pts = traj.second_foci()
    scene = SvgScene()
    extent = 1.5 * max([(s.p - F).norm() for s in traj.states] + [1.0])
    _draw_wall(scene, wall, extent)
    if wall.kind is WallKind.ELLIPSE:
        R = foci_pts[0].norm()
        scene.circle(0.0, 0.0, R, stroke="steelblue")
        try:
            cd = foci.params_caustic(foci.BilliardParams(wall, a, R))
            scene.circle(cd.x0, 0.0, abs(cd.r0), stroke="darkorange")
        except BilliardError:
            pass
    else:
        x = foci_pts[0].x
        ys = [f.y for f in foci_pts]
        scene.line((x, min(ys)), (x, max(ys)), stroke="steelblue")
    for s, nxt, f2 in zip(traj.states[:-1], traj.states[1:], foci_pts[:-1]):
        scene.path(kepler_arc(F, f2, a, s.p, nxt.p, (s.p - F).cross(s.u)), stroke="crimson")
    return scene.render()


# -- commands -------------------------------------------------------------------


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _params(args) -> foci.BilliardParams:
    return foci.BilliardParams.ellipse(args.aK, args.cK, args.a, args.R)


def cmd_analyze(args) -> int:
    rep = build_report(_params(args), args.nmax)
    _write(dumps(rep.to_dict()), args.out)
    if not rep.admissible:
        return EXIT_INADMISSIBLE
    return EXIT_NUMERICAL if rep.failure else EXIT_OK


def cmd_simulate(args) -> int:
    fmt = args.format
    if args.mode == "foci":
        for name in ("aK", "cK", "R"):
            if getattr(args, name) is None:
                raise UsageError(f"--{name} is required for foci mode")
        params = _params(args)
        if not foci.admissible(params):
            sys.stderr.write("inadmissible parameters\n")
            return EXIT_INADMISSIBLE
        F0 = Vec2.polar(params.R, args.theta0)
        orbit = sim.iterate_foci(params, F0, args.orientation, args.steps)
        rows, error = foci_rows(orbit), orbit.error
        header = FOCI_HEADER
        svg = (lambda: foci_svg(params, orbit))
    else:
        if args.mode == "physical":
            for name in ("aK", "cK"):
                if getattr(args, name) is None:
                    raise UsageError(f"--{name} is required for physical mode")
            wall = ConicWall.ellipse(args.aK, args.cK)
        else:
            if args.pPar is None:
                raise UsageError("--pPar is required for parabolic mode")
            wall = ConicWall.parabola(args.pPar)
        direction = args.dir
        if direction is None:
            # straight up from the apex of a parabola is a radial (degenerate) orbit
            direction = math.pi / 3 if args.mode == "parabolic" else 0.5 * math.pi
        try:
            state = sim.state_from_angles(wall, args.phi0, direction, args.a)
            second_focus(state, wall.F)
        except BilliardError as exc:
            _write(write_csv(PHYSICAL_HEADER, [], _error_trailer(f"{type(exc).__name__} {exc}")), args.out)
            return EXIT_NUMERICAL
        traj = sim.simulate_physical(state, wall, args.steps)
        rows, error = physical_rows(traj), traj.error
        header = PHYSICAL_HEADER
        svg = (lambda: physical_svg(traj, args.a))
        if args.mode == "parabolic":
            sys.stderr.write(f"foci_line_spread={sim.verify_foci_line(traj):.16e}\n")

    if fmt == "svg":
        _write(svg(), args.out)
    elif fmt == "json":
        doc = {"columns": list(header), "rows": rows}
        if error:
            doc["error"] = error
        _write(dumps(doc), args.out)
    else:
        _write(write_csv(header, rows, _error_trailer(error) if error else None), args.out)
    if error:
        sys.stderr.write(error + "\n")
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_search_periodic(args) -> int:
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    if args.grid < 100:
        raise UsageError("--grid must be at least 100")
    wall = ConicWall.ellipse(args.aK, args.cK)
    try:
        roots = cayley.find_periodic_R(wall, args.a, args.n, args.grid, closure_tol=args.closure_tol)
    except ValueError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_INADMISSIBLE
    doc = [{"R": r.R, "residual_before": r.residual_before, "closure_after": r.closure_after} for r in roots]
    _write(dumps(doc), args.out)
    return EXIT_OK


# -- argument parsing -----------------------------------------------------------


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be a positive real: {text!r}")
    return v


def _finite(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--tol", type=_positive, default=None, help="override every numerical tolerance")

    p = _Parser(prog="kepler-billiards", description="Kepler billiards in focused conic walls.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    an = sub.add_parser("analyze", parents=[common], help="parameter analysis report (JSON)")
    for name in ("aK", "cK", "a", "R"):
        an.add_argument(f"--{name}", type=_positive, required=True)
    an.add_argument("--nmax", type=int, default=8, help="largest n for periodicity residuals")
    an.set_defaults(func=cmd_analyze)

    si = sub.add_parser("simulate", parents=[common], help="foci-map or physical trajectory")
    si.add_argument("--mode", choices=("foci", "physical", "parabolic"), required=True)
    si.add_argument("--aK", type=_positive)
    si.add_argument("--cK", type=_positive)
    si.add_argument("--pPar", type=_positive)
    si.add_argument("--a", type=_positive, required=True)
    si.add_argument("--R", type=_positive)
    si.add_argument("--theta0", type=_finite, default=math.pi, help="angle of F0 on the foci circle")
    si.add_argument("--orientation", choices=(sim.CCW, sim.CW), default=sim.CCW)
    si.add_argument("--phi0", type=_finite, default=0.5 * math.pi, help="wall angle of the start point")
    si.add_argument(
        "--dir", type=_finite, default=None,
        help="initial velocity angle (default pi/2, or pi/3 for parabolic mode)",
    )
    si.add_argument("--steps", type=_nonneg_int, required=True)
    si.add_argument("--format", choices=("csv", "svg", "json"), default="csv")
    si.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("search-periodic", parents=[common], help="radii with n-periodic foci orbits")
    for name in ("aK", "cK", "a"):
        sp.add_argument(f"--{name}", type=_positive, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--grid", type=int, default=2000)
    sp.add_argument("--closure-tol", type=_positive, default=1e-8)
    sp.set_defaults(func=cmd_search_periodic)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {}
    if args.tol is not None:
        overrides = {name: args.tol for name in Tolerances.__dataclass_fields__}
    try:
        with tolerances(**overrides):
            return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"{parser.prog}: error: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        sys.stderr.write(f"{parser.prog}: error: {exc}\n")
        return EXIT_USAGE
    except BilliardError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
