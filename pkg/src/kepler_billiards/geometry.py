"""Planar conic primitives in the fixed billiard frame.

The empty focus of the wall sits at the origin and the Kepler centre at
``F = (-2 cK, 0)``.  Walls are parametrised by the polar angle ``phi`` of the
reflection point, measured from the origin (from ``F`` for a parabola).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import get_tolerances
from .errors import (
    BranchViolationError,
    DegeneratePointsError,
    HillBoundaryError,
    NotEllipticError,
    ParabolaAxisSingularityError,
    RootFindFailureError,
    TangencyError,
)

TWO_PI = 2.0 * math.pi


class Vec2(NamedTuple):
    x: float
    y: float

    def __add__(self, other):
        return Vec2(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Vec2(self.x - other[0], self.y - other[1])

    def __mul__(self, s):
        return Vec2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __neg__(self):
        return Vec2(-self.x, -self.y)

    def dot(self, other) -> float:
        return self.x * other[0] + self.y * other[1]

    def cross(self, other) -> float:
        return self.x * other[1] - self.y * other[0]

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def unit(self) -> "Vec2":
        n = self.norm()
        if n == 0.0:
            raise ValueError("zero vector has no direction")
        return Vec2(self.x / n, self.y / n)

    def perp(self) -> "Vec2":
        """Rotation by +90 degrees."""
        return Vec2(-self.y, self.x)

    @classmethod
    def polar(cls, r: float, angle: float) -> "Vec2":
        return cls(r * math.cos(angle), r * math.sin(angle))


class WallKind(str, enum.Enum):
    ELLIPSE = "EllipseWall"
    HYPERBOLA_NEAR_FPRIME = "HyperbolaNearFPrime"
    HYPERBOLA_NEAR_F = "HyperbolaNearF"
    PARABOLA = "ParabolaWall"


class OrbitKind(str, enum.Enum):
    ELLIPTIC = "EllipticOrbit"
    HYPERBOLIC_NEAR_F = "HyperbolicNearF"
    HYPERBOLIC_NEAR_FPRIME = "HyperbolicNearFPrime"


@dataclass(frozen=True)
class ConicWall:
    """Reflection wall with one focus at the Kepler centre.

    For a parabola ``aK`` is ignored, ``pPar`` is the semi-latus rectum and
    ``cK`` only places the focus ``F`` (default: the origin).
    """

    kind: WallKind
    aK: float = 0.0
    cK: float = 0.0
    pPar: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", WallKind(self.kind))
        if self.kind is WallKind.ELLIPSE:
            if not self.aK > self.cK > 0:
                raise ValueError("ellipse wall needs aK > cK > 0")
        elif self.kind is WallKind.PARABOLA:
            if not self.pPar > 0 or self.cK < 0:
                raise ValueError("parabola wall needs pPar > 0 and cK >= 0")
        elif not self.cK > self.aK > 0:
            raise ValueError("hyperbola wall needs cK > aK > 0")

    @classmethod
    def ellipse(cls, aK: float, cK: float) -> "ConicWall":
        return cls(WallKind.ELLIPSE, aK, cK)

    @classmethod
    def parabola(cls, pPar: float, cK: float = 0.0) -> "ConicWall":
        return cls(WallKind.PARABOLA, 0.0, cK, pPar)

    @property
    def F(self) -> Vec2:
        """Kepler centre."""
        return Vec2(-2.0 * self.cK, 0.0)

    @property
    def origin(self) -> Vec2:
        """Pole of the polar parametrisation."""
        return self.F if self.kind is WallKind.PARABOLA else Vec2(0.0, 0.0)

    @property
    def polar_coefficients(self) -> tuple[float, float, float]:
        """``(N, p, q)`` with ``r(phi) = N / (p + q cos phi)``."""
        aK, cK = self.aK, self.cK
        if self.kind is WallKind.ELLIPSE:
            return aK * aK - cK * cK, aK, cK
        if self.kind is WallKind.HYPERBOLA_NEAR_FPRIME:
            return cK * cK - aK * aK, aK, -cK
        if self.kind is WallKind.HYPERBOLA_NEAR_F:
            return cK * cK - aK * aK, -aK, -cK
        return self.pPar, 1.0, 1.0


class Line(NamedTuple):
    """The locus ``x cos(phi) + y sin(phi) + k = 0``."""

    phi: float
    k: float

    @property
    def normal(self) -> Vec2:
        return Vec2(math.cos(self.phi), math.sin(self.phi))

    @property
    def direction(self) -> Vec2:
        return self.normal.perp()

    def signed_distance(self, c) -> float:
        return c[0] * math.cos(self.phi) + c[1] * math.sin(self.phi) + self.k

    def angle_to(self, other: "Line") -> float:
        """Angle between the two lines as unoriented lines, in ``[0, pi/2]``."""
        d = (self.phi - other.phi) % math.pi
        return min(d, math.pi - d)


@dataclass(frozen=True)
class KeplerOrbit:
    f2: Vec2
    a: float
    kind: OrbitKind = OrbitKind.ELLIPTIC

    def focal_distance(self, F: Vec2) -> float:
        return (self.f2 - F).norm()

    def is_degenerate(self, F: Vec2) -> bool:
        """Radial segment orbit: ``|F f2| = 2a``."""
        return abs(self.focal_distance(F) - 2 * self.a) <= get_tolerances().geom * max(1.0, self.a)


@dataclass(frozen=True)
class ParticleState:
    """Phase point: position, unit outgoing direction and semi-major axis."""

    p: Vec2
    u: Vec2
    a: float

    def __post_init__(self):
        object.__setattr__(self, "p", Vec2(*self.p))
        object.__setattr__(self, "u", Vec2(*self.u))
        if abs(self.u.norm() - 1.0) > get_tolerances().unit:
            raise ValueError("direction u must be a unit vector")
        if not self.a > 0:
            raise ValueError("semi-major axis must be positive")


def _wall_radius(wall: ConicWall, phi: float) -> float:
    N, p, q = wall.polar_coefficients
    den = p + q * math.cos(phi)
    if wall.kind is WallKind.PARABOLA:
        if den <= 1e-14:
            raise ParabolaAxisSingularityError(f"parabola wall has no point at phi={phi!r}")
    elif wall.kind is WallKind.ELLIPSE:
        pass  # den >= aK - cK > 0
    elif den <= 0.0:
        raise BranchViolationError(f"phi={phi!r} is off the {wall.kind.value} branch")
    return N / den


def wall_point(wall: ConicWall, phi: float) -> Vec2:
    r = _wall_radius(wall, phi)
    return wall.origin + Vec2.polar(r, phi)


def _wall_derivative(wall: ConicWall, phi: float) -> Vec2:
    N, p, q = wall.polar_coefficients
    c, s = math.cos(phi), math.sin(phi)
    den = p + q * c
    r = N / den
    dr = N * q * s / (den * den)
    return Vec2(dr * c - r * s, dr * s + r * c)


def wall_tangent(wall: ConicWall, phi: float) -> Vec2:
    """Unit tangent at ``wall_point(wall, phi)``, oriented by increasing phi."""
    _wall_radius(wall, phi)  # branch checks
    return _wall_derivative(wall, phi).unit()


def second_focus(state: ParticleState, F: Vec2) -> Vec2:
    """Empty focus of the elliptic Kepler orbit through ``state``."""
    to_p = state.p - F
    rho = to_p.norm()
    two_a = 2.0 * state.a
    tol = get_tolerances().geom * max(1.0, two_a)
    if abs(rho - two_a) <= tol:
        raise HillBoundaryError("particle on the Hill boundary |pF| = 2a")
    if rho > two_a:
        raise NotEllipticError("particle outside the Hill disk |pF| <= 2a")
    if rho == 0.0:
        raise NotEllipticError("particle at the Kepler centre")
    d = to_p * (1.0 / rho)
    d2 = reflect_direction(d, state.u)
    return state.p + d2 * (two_a - rho)


def reflect_direction(u: Vec2, tangent: Vec2) -> Vec2:
    """Keep the component of ``u`` along ``tangent``, negate the normal one."""
    u = Vec2(*u)
    t = Vec2(*tangent)
    return t * (2.0 * u.dot(t)) - u


def orbit_tangent(orbit: KeplerOrbit, F: Vec2, q: Vec2) -> Vec2:
    """Unit tangent of the orbit conic at ``q`` (orientation arbitrary)."""
    n = (q - F).unit() + (q - orbit.f2).unit()
    if n.norm() < 1e-14:
        raise TangencyError(None, "orbit tangent undefined on the focal segment")
    return n.unit().perp()


# -- wall/orbit intersection -------------------------------------------------

_GRID = 720


def _g_values(orbit: KeplerOrbit, wall: ConicWall, phis: np.ndarray, F: Vec2) -> np.ndarray:
    N, p, q = wall.polar_coefficients
    den = p + q * np.cos(phis)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = N / den
    ox, oy = wall.origin
    x = ox + r * np.cos(phis)
    y = oy + r * np.sin(phis)
    g = np.hypot(x - F.x, y - F.y) + np.hypot(x - orbit.f2.x, y - orbit.f2.y) - 2.0 * orbit.a
    # points at infinity (parabola axis) or off a hyperbola branch count as "outside"
    g[~(den > 1e-14)] = np.inf
    return g


def _g(orbit, wall, phi, F):
    P = wall_point(wall, phi)
    return (P - F).norm() + (P - orbit.f2).norm() - 2.0 * orbit.a


def _dg(orbit, wall, phi, F):
    P = wall_point(wall, phi)
    return _wall_derivative(wall, phi).dot((P - F).unit() + (P - orbit.f2).unit())


def next_wall_intersection(orbit: KeplerOrbit, wall: ConicWall, phi_current: float) -> float:
    """Other wall angle where the orbit conic meets the wall.

    Two conics sharing the focus ``F`` meet in at most two points, so
    ``g(phi) = |FP| + |F2 P| - 2a`` changes sign exactly twice when the orbit
    crosses the wall.  The sign scan runs on ``g(phi) / sin((phi - phi_c)/2)``,
    which removes the known root at ``phi_c``.

    Raises ``TangencyError`` when the only contact is at ``phi_current``.
    """
    tol = get_tolerances()
    F = wall.F
    scale = max(1.0, orbit.a)
    if abs(_g(orbit, wall, phi_current, F)) > 1e3 * tol.geom * scale:
        raise ValueError("orbit does not pass through wall_point(phi_current)")
    slope = _dg(orbit, wall, phi_current, F)
    if abs(slope) <= 1e-9 * scale:
        raise TangencyError(phi_current)

    offsets = TWO_PI * np.arange(1, _GRID) / _GRID
    g = _g_values(orbit, wall, phi_current + offsets, F)
    # limiting signs of the deflated function at both ends of the open interval
    signs = np.concatenate(([math.copysign(1.0, slope)], np.sign(g), [-math.copysign(1.0, slope)]))
    knots = np.concatenate(([0.0], offsets, [TWO_PI]))
    change = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    zero = np.nonzero(signs == 0)[0]
    if zero.size:
        return float((phi_current + knots[zero[0]] + math.pi) % TWO_PI - math.pi)
    if change.size == 0:
        raise TangencyError(phi_current)

    lo, hi = knots[change[0]], knots[change[0] + 1]
    s_lo = signs[change[0]]

    def h(off):
        return _g(orbit, wall, phi_current + off, F) / math.sin(0.5 * off)

    for _ in range(200):
        if hi - lo <= tol.root:
            break
        mid = 0.5 * (lo + hi)
        v = h(mid)
        if v == 0.0:
            lo = hi = mid
            break
        if math.copysign(1.0, v) == s_lo:
            lo = mid
        else:
            hi = mid
    else:
        raise RootFindFailureError("bisection did not converge")
    off = 0.5 * (lo + hi)
    return float((phi_current + off + math.pi) % TWO_PI - math.pi)


# -- lines -------------------------------------------------------------------


def line_from_points(p, q) -> Line:
    p, q = Vec2(*p), Vec2(*q)
    d = q - p
    n = d.norm()
    if n <= get_tolerances().geom * max(1.0, p.norm()):
        raise DegeneratePointsError("line through coincident points")
    normal = d.perp() * (1.0 / n)
    phi = math.atan2(normal.y, normal.x) % TWO_PI
    return Line(phi, -normal.dot(p))


def line_through(point, normal_angle: float) -> Line:
    """Line through ``point`` with unit normal at ``normal_angle``."""
    phi = normal_angle % TWO_PI
    return Line(phi, -(point[0] * math.cos(phi) + point[1] * math.sin(phi)))


def point_line_distance(c, line: Line) -> float:
    return abs(line.signed_distance(c))
