"""Cayley-type conditions for n-periodic foci orbits.

``sqrt(F(t)) = sum A_i t^i`` with ``F = C0 + C1 t + C2 t^2 + C3 t^3`` the
(sign-flipped) pencil determinant.  An n-periodic Poncelet polygon exists iff
a Hankel determinant in the ``A_i`` vanishes: entries ``A_2 .. A_{2m}`` for
``n = 2m + 1`` and ``A_3 .. A_{2m-1}`` for ``n = 2m``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    BilliardError,
    NoRealR2Error,
    SeriesTooShortError,
    UnsupportedNError,
    ZeroA0Error,
)
from .foci import BilliardParams, CausticData, admissible, params_caustic, r2_radius
from .geometry import ConicWall, Vec2, WallKind


@dataclass(frozen=True)
class CCoeffs:
    c0: float
    c1: float
    c2: float
    c3: float
    a0: float  # signed square root of c0 (= r0)

    def as_list(self) -> list[float]:
        return [self.c0, self.c1, self.c2, self.c3]


@dataclass(frozen=True)
class CayleySeries:
    coeffs: tuple[float, ...]

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)

    def squared(self) -> list[float]:
        """Cauchy square truncated at the series order."""
        A = self.coeffs
        return [sum(A[i] * A[m - i] for i in range(m + 1)) for m in range(len(A))]


class ResidualKind(str, enum.Enum):
    HANKEL = "Hankel"
    CLOSED_FORM = "ClosedForm"


@dataclass(frozen=True)
class PeriodicityResidual:
    n: int
    value: float
    kind: ResidualKind = ResidualKind.HANKEL
    scale: float = 1.0  # max(1, |entries|^m) used for normalisation

    @property
    def normalized(self) -> float:
        return self.value / self.scale


def c_coeffs(cd: CausticData, R: float) -> CCoeffs:
    x0, r0 = cd.x0, cd.r0
    return CCoeffs(
        r0 * r0,
        2 * r0 * r0 + R * R - x0 * x0,
        2 * R * R - x0 * x0 + r0 * r0,
        R * R,
        r0,
    )


def series(cc: CCoeffs, order: int, sign: int = 1) -> CayleySeries:
    """Taylor coefficients ``A_0 .. A_order``; ``sign=-1`` picks ``A_0 = -r0``."""
    a0 = sign * cc.a0
    if a0 == 0.0 or cc.c0 == 0.0:
        raise ZeroA0Error("series needs r0 != 0 (the n = 2 case is r2_radius)")
    C = cc.as_list() + [0.0] * max(0, order - 3)
    A = [a0]
    for m in range(1, order + 1):
        # 2 A0 Am + sum_{i=1}^{m-1} A_i A_{m-i} = C_m
        acc = sum(A[i] * A[m - i] for i in range(1, m))
        A.append((C[m] - acc) / (2.0 * a0))
    return CayleySeries(tuple(A))


def required_order(n: int) -> int:
    if n < 3:
        raise UnsupportedNError("Hankel criterion needs n >= 3 (n = 2 is r0 = 0)")
    m = n // 2
    return 2 * m if n % 2 else 2 * m - 1


def hankel_matrix(s: CayleySeries, n: int) -> np.ndarray:
    need = required_order(n)
    if len(s) <= need:
        raise SeriesTooShortError(f"n={n} needs A_0..A_{need}, have {len(s)} coefficients")
    m = n // 2
    if n % 2:
        size, first = m, 2
    else:
        size, first = m - 1, 3
    return np.array([[s[first + i + j] for j in range(size)] for i in range(size)], dtype=float)


def hankel_residual(s: CayleySeries, n: int) -> PeriodicityResidual:
    H = hankel_matrix(s, n)
    size = H.shape[0]
    value = float(H[0, 0]) if size == 1 else float(np.linalg.det(H))
    scale = max(1.0, float(np.max(np.abs(H))) ** size)
    return PeriodicityResidual(n, value, ResidualKind.HANKEL, scale)


def residual_at(params: BilliardParams, n: int, sign: int = 1) -> PeriodicityResidual:
    cd = params_caustic(params)
    cc = c_coeffs(cd, params.R)
    return hankel_residual(series(cc, required_order(n), sign), n)


def closed_form_n3(cd: CausticData, R: float) -> tuple[float, float]:
    x0, r0 = cd.x0, cd.r0
    return 2 * R * r0 + x0 * x0 - R * R, 2 * R * r0 - x0 * x0 + R * R


@dataclass(frozen=True)
class N4ClosedForm:
    factor1: float  # R^2 - x0^2
    factor2: float  # 2 r0^2 (R^2 + x0^2) - (R^2 - x0^2)^2
    explicit_R: float | None = None
    explicit_admissible: bool | None = None


def explicit_n4_radius(aK: float, cK: float, a: float) -> float:
    """R solving ``R = |x0(R)|`` for the elliptic wall."""
    N = aK * aK - cK * cK
    return N / cK * (1.0 + math.sqrt(1.0 + 4 * cK * cK * (a - aK) ** 2 / (N * N)))


def closed_form_n4(
    cd: CausticData, R: float, wall: ConicWall | None = None, a: float | None = None
) -> N4ClosedForm:
    x0, r0 = cd.x0, cd.r0
    d = R * R - x0 * x0
    f2 = 2 * r0 * r0 * (R * R + x0 * x0) - d * d
    if wall is None or a is None:
        return N4ClosedForm(d, f2)
    return N4ClosedForm(d, f2, explicit_n4_radius(wall.aK, wall.cK, a), 3 * wall.cK >= wall.aK)


# -- root search --------------------------------------------------------------

PINCH_EXCLUSION = 1e-6
BISECTION_TOL = 1e-11
# normalised |residual| above this at a converged bracket means a pole, not a root
POLE_REJECT = 1e-6


@dataclass(frozen=True)
class PeriodicRoot:
    R: float
    residual_before: float
    closure_after: float | None = None


def _bisect(f: Callable[[float], float], lo: float, hi: float, flo: float) -> float:
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _normalized_residual(wall: ConicWall, a: float, n: int, sign: int) -> Callable[[float], float]:
    def f(R: float) -> float:
        try:
            return residual_at(BilliardParams(wall, a, R), n, sign).normalized
        except ZeroA0Error:
            return math.nan

    return f


def find_periodic_R(
    wall: ConicWall,
    a: float,
    n: int,
    grid_size: int = 2000,
    verify: Callable[[float], float] | bool = True,
    sign: int = 1,
    closure_tol: float = 1e-8,
) -> list[PeriodicRoot]:
    """Roots of the n-periodicity residual over the open admissible R-interval.

    Each root is re-checked by iterating the chord map n times from
    ``(-R, 0)``; roots whose closure exceeds ``closure_tol`` are dropped.  A
    callable ``verify(R)`` replaces that check, ``verify=False`` skips it.
    """
    if wall.kind is not WallKind.ELLIPSE:
        raise ValueError("root search implemented for the elliptic wall")
    if n < 2:
        raise UnsupportedNError("n must be >= 2")
    aK, cK = wall.aK, wall.cK
    lo, hi = 2 * abs(a - aK), 2 * a + 2 * cK
    if not admissible(BilliardParams(wall, a, 0.5 * (lo + hi))):
        raise ValueError(f"a={a!r} admits no billiard for this wall")

    if n == 2:
        try:
            R2 = r2_radius(aK, cK, a)
        except NoRealR2Error:
            return []
        if not lo < R2 < hi:
            return []
        roots = [PeriodicRoot(R2, params_caustic(BilliardParams(wall, a, R2)).r0)]
    else:
        f = _normalized_residual(wall, a, n, sign)
        pinch = 2 * (a - cK)
        grid = np.linspace(lo, hi, grid_size + 1)[1:-1]
        grid = grid[np.abs(grid - pinch) >= PINCH_EXCLUSION]
        vals = [f(R) for R in grid]
        roots = []
        for R_lo, R_hi, f_lo, f_hi in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
            if not (np.isfinite(f_lo) and np.isfinite(f_hi)):
                continue
            if R_lo < pinch < R_hi:
                continue
            if f_lo == 0.0:
                root = float(R_lo)
            elif f_lo * f_hi < 0:
                root = _bisect(f, float(R_lo), float(R_hi), f_lo)
            else:
                continue
            val = f(root)
            if not abs(val) <= POLE_REJECT:
                continue
            if roots and abs(roots[-1].R - root) < 10 * BISECTION_TOL:
                continue
            roots.append(PeriodicRoot(root, val))

    if verify is False:
        return roots
    if verify is True:
        from .sim import closure_at_root

        def verify(R: float) -> float:
            return closure_at_root(wall, a, n, R)

    out = []
    for r in roots:
        try:
            c = verify(r.R)
        except BilliardError:
            continue
        if c < closure_tol:
            out.append(PeriodicRoot(r.R, r.residual_before, c))
    return out


def default_start(R: float) -> Vec2:
    """Point of the foci circle farthest from the caustic centre (x0 > 0)."""
    return Vec2(-R, 0.0)
