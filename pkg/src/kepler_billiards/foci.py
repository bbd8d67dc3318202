"""Conserved quantities, the foci-caustic circle and scenario classes.

At a reflection point ``P`` with ``B = |F'P|`` and ``C = |F_i P|`` the wall
and orbit two-foci relations give ``C = s*B + D`` for a sign ``s`` and a
constant ``D`` fixed by the (wall, orbit) pair.  With the wall written as
``B = N / (p + q cos phi)`` the chord line ``x cos phi + y sin phi + k = 0``
has ``k = (D^2 - R^2)(p + q cos phi) / (2N) + s*D``, i.e. it is tangent to the
circle centred at ``(x0, 0)`` with signed radius ``r0`` where

    x0 = -(D^2 - R^2) q / (2N),     r0 = (D^2 - R^2) p / (2N) + s*D.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .config import get_tolerances
from .errors import (
    NoRealChordError,
    NoRealR2Error,
    ParabolicWallError,
    UnsupportedCombinationError,
)
from .geometry import ConicWall, Line, OrbitKind, Vec2, WallKind

E, HFP, HF = WallKind.ELLIPSE, WallKind.HYPERBOLA_NEAR_FPRIME, WallKind.HYPERBOLA_NEAR_F
OE, OHFP, OHF = OrbitKind.ELLIPTIC, OrbitKind.HYPERBOLIC_NEAR_FPRIME, OrbitKind.HYPERBOLIC_NEAR_F

# (wall, orbit) -> (s, alpha, beta) meaning C = s*B + 2*(alpha*aK + beta*a)
SIGN_TABLE: dict[tuple[WallKind, OrbitKind], tuple[int, int, int]] = {
    (E, OE): (+1, -1, +1),  # C - B = 2(a - aK)
    (E, OHFP): (-1, +1, -1),  # C + B = 2(aK - a)
    (E, OHF): (-1, +1, +1),  # C + B = 2(a + aK)
    (HFP, OE): (-1, -1, +1),  # C + B = 2(a - aK)
    (HFP, OHFP): (+1, +1, -1),  # C - B = 2(aK - a)
    (HFP, OHF): (+1, +1, +1),  # C - B = 2(aK + a)
    (HF, OE): (-1, +1, +1),  # C + B = 2(a + aK)
    (HF, OHFP): (+1, -1, -1),  # B - C = 2(aK + a)
    (HF, OHF): (+1, -1, +1),  # B - C = 2(aK - a)
}


@dataclass(frozen=True)
class CausticData:
    x0: float
    r0: float

    @property
    def center(self) -> Vec2:
        return Vec2(self.x0, 0.0)

    @property
    def radius(self) -> float:
        return abs(self.r0)


@dataclass(frozen=True)
class BilliardParams:
    wall: ConicWall
    a: float
    R: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("semi-major axis a must be positive")
        if not self.R >= 0:
            raise ValueError("foci-circle radius R must be non-negative")

    @classmethod
    def ellipse(cls, aK: float, cK: float, a: float, R: float) -> "BilliardParams":
        return cls(ConicWall.ellipse(aK, cK), a, R)

    @property
    def RPrime(self) -> float:
        return 2.0 * self.wall.cK - self.R

    @property
    def aK(self) -> float:
        return self.wall.aK

    @property
    def cK(self) -> float:
        return self.wall.cK

    def with_R(self, R: float) -> "BilliardParams":
        return BilliardParams(self.wall, self.a, R)


@dataclass(frozen=True)
class ReflectionGeometry:
    phi: float
    A1: float
    B1: float
    C1: float
    k: float
    h: float


class ScenarioClass(str, enum.Enum):
    COINCIDENT_CIRCLES = "CoincidentCircles"
    TWO_PERIODIC_POINT = "TwoPeriodicPoint"
    CAUSTIC_INSIDE = "CausticInside"
    INNER_TANGENCY = "InnerTangency"
    TRANSVERSAL = "Transversal"
    OUTER_TANGENCY = "OuterTangency"
    INADMISSIBLE = "Inadmissible"


def _relation(wall_kind: WallKind, orbit_kind: OrbitKind, aK: float, a: float) -> tuple[int, float]:
    s, alpha, beta = SIGN_TABLE[(wall_kind, orbit_kind)]
    return s, 2.0 * (alpha * aK + beta * a)


def caustic(wall_kind, orbit_kind, aK: float, cK: float, a: float, R: float) -> CausticData:
    wall_kind, orbit_kind = WallKind(wall_kind), OrbitKind(orbit_kind)
    if wall_kind is WallKind.PARABOLA:
        raise ParabolicWallError("a parabolic wall has a foci-line, not a caustic circle")
    wall = ConicWall(wall_kind, aK, cK)
    N, p, q = wall.polar_coefficients
    s, D = _relation(wall_kind, orbit_kind, aK, a)
    # largest B on the wall: C = s*B + D must be positive somewhere
    b_min = aK - cK if wall_kind is E else (cK - aK if wall_kind is HFP else cK + aK)
    c_max = D + aK + cK if (s > 0 and wall_kind is E) else (math.inf if s > 0 else D - b_min)
    if c_max <= 0:
        raise UnsupportedCombinationError(
            f"({wall_kind.value}, {orbit_kind.value}) has no positive C1 for a={a!r}"
        )
    w = D * D - R * R
    return CausticData(-w * q / (2.0 * N), w * p / (2.0 * N) + s * D)


def params_caustic(params: BilliardParams, orbit_kind=OE) -> CausticData:
    return caustic(params.wall.kind, orbit_kind, params.aK, params.cK, params.a, params.R)


def _close(x: float, y: float, scale: float) -> bool:
    return abs(x - y) <= get_tolerances().boundary * max(1.0, scale)


def admissible(params: BilliardParams) -> bool:
    aK, cK, a, R = params.aK, params.cK, params.a, params.R
    if params.wall.kind is not E:
        raise ValueError("admissibility is defined for the elliptic wall")
    lo, hi = 2.0 * abs(aK - a), 2.0 * a + 2.0 * cK
    in_range = (R > lo or _close(R, lo, hi)) and (R < hi or _close(R, hi, hi))
    return 2.0 * a > aK - cK > 0 and in_range


def r2_radius(aK: float, cK: float, a: float) -> float:
    """Foci-circle radius at which the caustic shrinks to a point."""
    prod = (a - aK) * (a - cK * cK / aK)
    if prod < 0:
        raise NoRealR2Error(f"no real R2 for aK={aK!r}, cK={cK!r}, a={a!r}")
    return 2.0 * math.sqrt(prod)


def scenario_boundaries(aK: float, cK: float, a: float) -> dict[str, float]:
    out = {
        "coincident": 2.0 * abs(a - aK),
        "inner_tangency": 2.0 * (a - cK),
        "outer_tangency": 2.0 * (a + cK),
    }
    # R2 exists in Case 1 only for a >= aK; for (aK+cK)/2 <= a < aK the caustic
    # radius stays negative and never shrinks to a point
    if 2.0 * a >= aK + cK and a >= aK:
        out["R2"] = r2_radius(aK, cK, a)
    return out


def classify(params: BilliardParams) -> ScenarioClass:
    if not admissible(params):
        return ScenarioClass.INADMISSIBLE
    aK, cK, a, R = params.aK, params.cK, params.a, params.R
    b = scenario_boundaries(aK, cK, a)
    scale = b["outer_tangency"]
    if _close(R, b["coincident"], scale):
        return ScenarioClass.COINCIDENT_CIRCLES
    if _close(R, b["outer_tangency"], scale):
        return ScenarioClass.OUTER_TANGENCY
    if 2.0 * a < aK + cK:  # Case 2: circles always cross
        return ScenarioClass.TRANSVERSAL
    if _close(R, b["inner_tangency"], scale):
        return ScenarioClass.INNER_TANGENCY
    if R > b["inner_tangency"]:
        return ScenarioClass.TRANSVERSAL
    if "R2" in b and _close(R, b["R2"], scale):
        return ScenarioClass.TWO_PERIODIC_POINT
    return ScenarioClass.CAUSTIC_INSIDE


def reflection_geometry(params: BilliardParams, phi: float) -> ReflectionGeometry:
    if params.wall.kind is not E:
        raise ValueError("chord construction implemented for the elliptic wall")
    aK, cK, a, R = params.aK, params.cK, params.a, params.R
    B1 = (aK * aK - cK * cK) / (aK + cK * math.cos(phi))
    A1 = 2.0 * aK - B1
    C1 = B1 + 2.0 * (a - aK)
    k = (C1 * C1 - B1 * B1 - R * R) / (2.0 * B1)
    h2 = R * R - k * k
    if h2 < -get_tolerances().geom * max(1.0, R * R):
        raise NoRealChordError(f"no reflection at phi={phi!r}: R^2 < k^2")
    return ReflectionGeometry(phi, A1, B1, C1, k, math.sqrt(max(h2, 0.0)))


def chord_line_at(params: BilliardParams, phi: float) -> tuple[Line, ReflectionGeometry]:
    """Line through consecutive second foci for a reflection at wall angle phi."""
    geo = reflection_geometry(params, phi)
    return Line(phi % (2.0 * math.pi), geo.k), geo


def chord_endpoints(line: Line, geo: ReflectionGeometry) -> tuple[Vec2, Vec2]:
    mid = line.normal * (-geo.k)
    d = line.direction * geo.h
    return mid - d, mid + d


__all__ = [
    "BilliardParams",
    "CausticData",
    "ReflectionGeometry",
    "ScenarioClass",
    "SIGN_TABLE",
    "admissible",
    "caustic",
    "chord_endpoints",
    "chord_line_at",
    "classify",
    "params_caustic",
    "r2_radius",
    "reflection_geometry",
    "scenario_boundaries",
]
