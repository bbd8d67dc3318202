"""Dynamics: the physical billiard map and the Poncelet chord map on second foci."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BilliardError,
    InsideCausticError,
    TangentDegeneracyError,
)
from .foci import BilliardParams, ScenarioClass, classify, params_caustic
from .geometry import (
    TWO_PI,
    ConicWall,
    KeplerOrbit,
    Line,
    ParticleState,
    Vec2,
    WallKind,
    line_from_points,
    line_through,
    next_wall_intersection,
    orbit_tangent,
    reflect_direction,
    second_focus,
    wall_point,
    wall_tangent,
)

CCW, CW = "ccw", "cw"

# |d - rho| below this fraction of R counts as "on the caustic"
_ON_CAUSTIC = 64 * 2.0**-52


@dataclass(frozen=True)
class ChordMap:
    """Foci circle ``|z| = R`` with the caustic ``S((x0, 0), |r0|)``."""

    R: float
    x0: float
    r0: float

    @classmethod
    def from_params(cls, params: BilliardParams) -> "ChordMap":
        return _chord_map(params)

    @property
    def center(self) -> Vec2:
        return Vec2(self.x0, 0.0)

    @property
    def radius(self) -> float:
        return abs(self.r0)

    @property
    def touch_point(self) -> Vec2 | None:
        """Common point when the two circles are tangent, else None."""
        R, x, rho = self.R, abs(self.x0), self.radius
        tol = 1e-12 * max(1.0, R)
        if x > 0 and (abs(x + rho - R) <= tol or abs(x - rho - R) <= tol):
            return Vec2(math.copysign(R, self.x0), 0.0)
        return None


@functools.lru_cache(maxsize=256)
def _chord_map(params: BilliardParams) -> ChordMap:
    cd = params_caustic(params)
    return ChordMap(params.R, cd.x0, cd.r0)


@dataclass
class FociOrbit:
    points: list[Vec2]
    chords: list[Line]
    error: str | None = None
    exc: Exception | None = field(default=None, repr=False, compare=False)


@dataclass
class BilliardTrajectory:
    states: list[ParticleState]
    phis: list[float]
    wall: ConicWall
    error: str | None = None

    def second_foci(self) -> list[Vec2]:
        return [second_focus(s, self.wall.F) for s in self.states]


@dataclass(frozen=True)
class ClosureReport:
    n: int
    residual: float


@dataclass(frozen=True)
class RotationEstimate:
    rho: float
    steps: int
    drift: float
    rho_plain: float = field(default=math.nan)


def _error_tag(exc: Exception, step: int) -> str:
    return f"{type(exc).__name__} at step {step}: {exc}"


def _label(cm: ChordMap, F: Vec2, line: Line) -> str:
    # walk from F towards the touching point; which side is the centre on?
    C = cm.center
    T = C - line.normal * line.signed_distance(C)
    return CCW if (T - F).cross(C - F) > 0 else CW


def orientation_of(cm: ChordMap, F, F_next) -> str:
    """``ccw`` when the caustic centre lies left of the ray from ``F`` to the
    touching point of the chord ``F F_next``.

    When both circles are nested the touching point lies between ``F`` and
    ``F_next``; in transversal configurations it may lie beyond either end,
    which is why the chord direction itself is not used.
    """
    F = Vec2(*F)
    return _label(cm, F, line_from_points(F, F_next))


def _tangent_candidates(cm: ChordMap, F: Vec2) -> list[tuple[Vec2, Line]]:
    v = cm.center - F
    d = v.norm()
    rho = cm.radius
    tol = _ON_CAUSTIC * max(1.0, cm.R)
    if rho <= tol:
        if d <= tol:
            raise TangentDegeneracyError("point caustic coincides with F")
        alphas = (0.5 * math.pi,)
    elif d < rho - tol:
        raise InsideCausticError(f"F={tuple(F)} lies inside the caustic circle")
    elif d <= rho + tol:
        T = cm.touch_point
        if T is not None:
            # the one real orbit there is the fixed point at the touching point
            return [(T, line_through(T, math.atan2(T.y, T.x)))]
        if d <= tol:
            raise TangentDegeneracyError(f"F={tuple(F)} lies on the caustic circle")
        # crossing point of the two circles: the caustic tangent at F is a double root
        alphas = (0.0,)
    else:
        alpha = math.acos(rho / d)
        alphas = (alpha, -alpha)
    beta = math.atan2(v.y, v.x)
    out = []
    for al in alphas:
        line = line_through(F, beta + al)
        u = line.direction
        t = -2.0 * F.dot(u)
        nxt = F + u * t
        nxt = nxt * (cm.R / nxt.norm())
        out.append((nxt, line))
    return out


def poncelet_step(
    F, incoming: Line | None, params: BilliardParams | ChordMap, orientation: str = CCW
) -> tuple[Vec2, Line]:
    """Next second focus along the caustic tangent through ``F``.

    With an incoming chord the other tangent is taken; otherwise the one
    matching ``orientation`` (caustic centre on the left for ``ccw``).
    """
    cm = params if isinstance(params, ChordMap) else ChordMap.from_params(params)
    F = Vec2(*F)
    if abs(F.norm() - cm.R) > 1e-9 * max(1.0, cm.R):
        raise ValueError(f"F={tuple(F)} is not on the foci circle |z| = {cm.R!r}")
    cands = _tangent_candidates(cm, F)
    if len(cands) == 1:
        return cands[0]
    if incoming is not None:
        return max(cands, key=lambda c: c[1].angle_to(incoming))
    want = orientation.lower()
    if want not in (CCW, CW):
        raise ValueError("orientation must be 'ccw' or 'cw'")
    for nxt, line in cands:
        if _label(cm, F, line) == want:
            return nxt, line
    return cands[0]


def iterate_foci(params, F0, orientation: str = CCW, N: int = 1) -> FociOrbit:
    cm = params if isinstance(params, ChordMap) else ChordMap.from_params(params)
    F = Vec2(*F0)
    points, chords = [F], []
    incoming = None
    for i in range(N):
        try:
            F, incoming = poncelet_step(F, incoming, cm, orientation)
        except BilliardError as exc:
            return FociOrbit(points, chords, _error_tag(exc, i), exc)
        points.append(F)
        chords.append(incoming)
    return FociOrbit(points, chords)


def closure_residual(params, F0, orientation: str = CCW, n: int = 3) -> ClosureReport:
    orbit = iterate_foci(params, F0, orientation, n)
    if orbit.error:
        raise orbit.exc
    return ClosureReport(n, (orbit.points[n] - orbit.points[0]).norm())


def closure_at_root(wall: ConicWall, a: float, n: int, R: float) -> float:
    """Closure residual from the standard start ``(-R, 0)``."""
    return closure_residual(BilliardParams(wall, a, R), Vec2(-R, 0.0), CCW, n).residual


# -- rotation number -----------------------------------------------------------


def _bump_weights(n: int) -> np.ndarray:
    t = (np.arange(n) + 0.5) / n
    w = np.exp(-1.0 / (t * (1.0 - t)))
    return w / w.sum()


def rotation_number(params, F0, N: int = 10_000, orientation: str = CCW) -> RotationEstimate:
    """Mean angular advance per step on the foci circle, in turns.

    Uses a smooth-bump weighted Birkhoff average, which converges far faster
    than the plain mean on quasi-periodic orbits; the plain mean is kept as
    ``rho_plain`` and ``drift`` compares the two halves of the orbit.
    """
    if isinstance(params, BilliardParams):
        scen = classify(params)
        if scen not in (ScenarioClass.CAUSTIC_INSIDE, ScenarioClass.TWO_PERIODIC_POINT):
            raise ValueError(f"rotation number needs a nested caustic, got {scen.value}")
    orbit = iterate_foci(params, F0, orientation, N)
    if orbit.error:
        raise orbit.exc
    pts = np.array(orbit.points)
    ang = np.arctan2(pts[:, 1], pts[:, 0])
    adv = np.mod(np.diff(ang), TWO_PI)
    rho = float(np.dot(_bump_weights(N), adv) / TWO_PI)
    h = N // 2
    first = float(np.dot(_bump_weights(h), adv[:h]) / TWO_PI)
    second = float(np.dot(_bump_weights(N - h), adv[h:]) / TWO_PI)
    return RotationEstimate(rho, N, abs(first - second), float(adv.mean() / TWO_PI))


# -- physical billiard ---------------------------------------------------------


def wall_angle(wall: ConicWall, p) -> float:
    v = Vec2(*p) - wall.origin
    return math.atan2(v.y, v.x)


def physical_step(state: ParticleState, wall: ConicWall) -> ParticleState:
    """Follow the orbit conic to the next wall hit and reflect there."""
    if wall.kind not in (WallKind.ELLIPSE, WallKind.PARABOLA):
        raise ValueError("physical simulation supports ellipse and parabola walls")
    F = wall.F
    orbit = KeplerOrbit(second_focus(state, F), state.a)
    phi = wall_angle(wall, state.p)
    phi_next = next_wall_intersection(orbit, wall, phi)
    q = wall_point(wall, phi_next)
    spin = (state.p - F).cross(state.u)
    v = orbit_tangent(orbit, F, q)
    if (q - F).cross(v) * spin < 0:
        v = -v
    u_new = reflect_direction(v, wall_tangent(wall, phi_next)).unit()
    return ParticleState(q, u_new, state.a)


def simulate_physical(state: ParticleState, wall: ConicWall, N: int) -> BilliardTrajectory:
    states = [state]
    phis = [wall_angle(wall, state.p)]
    for i in range(N):
        try:
            state = physical_step(state, wall)
        except BilliardError as exc:
            return BilliardTrajectory(states, phis, wall, _error_tag(exc, i))
        states.append(state)
        phis.append(wall_angle(wall, state.p))
    return BilliardTrajectory(states, phis, wall)


def state_from_angles(wall: ConicWall, phi: float, direction: float, a: float) -> ParticleState:
    return ParticleState(wall_point(wall, phi), Vec2.polar(1.0, direction), a)


def state_with_focus(params: BilliardParams, phi: float, which: int = 0, outward: bool = True):
    """Physical state at wall angle ``phi`` whose second focus is a chord endpoint.

    ``which`` picks the endpoint, ``outward`` whether the particle leaves the
    wall towards its exterior.
    """
    from .foci import chord_endpoints, chord_line_at

    line, geo = chord_line_at(params, phi)
    F1 = chord_endpoints(line, geo)[which]
    wall = params.wall
    p = wall_point(wall, phi)
    u = orbit_tangent(KeplerOrbit(F1, params.a), wall.F, p)
    outer = wall_tangent(wall, phi).perp() * -1.0  # ccw-parametrised: exterior is to the right
    if (u.dot(outer) > 0) != outward:
        u = -u
    return ParticleState(p, u, params.a)


def foci_circle_deviation(traj: BilliardTrajectory, R: float | None = None) -> float:
    foci = traj.second_foci()
    radii = [f.norm() for f in foci]
    ref = radii[0] if R is None else R
    return max(abs(r - ref) for r in radii)


def verify_foci_line(traj: BilliardTrajectory, wall: ConicWall | None = None) -> float:
    """Spread of the second-focus x-coordinates (the axis is along x)."""
    xs = [f.x for f in traj.second_foci()]
    return max(xs) - min(xs)


def chord_tangency_error(cm: ChordMap, chords) -> float:
    return max((abs(abs(c.signed_distance(cm.center)) - cm.radius) for c in chords), default=0.0)


def chords_of(points) -> list[Line]:
    return [line_from_points(p, q) for p, q in zip(points[:-1], points[1:])]
