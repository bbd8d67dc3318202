"""Elliptic curve of the foci-chord map: pencil cubic, Weierstrass data, periods.

The pencil ``det(t Q1 + Q2)`` of the foci circle ``|z| = R`` and the caustic
circle ``S((x0, 0), |r0|)`` factors as ``-R^2 (t + 1)(t + t1)(t + t2)``.
Periods, shift and frequency are improper integrals of the invariant
differential ``dt / sqrt(4 t^3 - g2 t - g3)``.  Two independent evaluation
routes are provided:

* ``invariant_tail`` - adaptive quadrature after ``t = c + s^2`` and
  ``s = tan(theta)``, which leaves a bounded smooth integrand on
  ``[0, pi/2]``;
* ``jacobi_reduce`` - reduction to the incomplete integral of the first kind
  ``F(x, k)``, evaluated through Carlson's ``R_F`` with the duplication
  algorithm.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Union

from scipy import integrate

from .config import get_tolerances
from .errors import BranchError, QuadratureFailureError, SingularPencilError
from .foci import BilliardParams, params_caustic, scenario_boundaries

Number = Union[float, complex]

# |delta| below this fraction of R^4 is treated as the pinched (singular) curve
PINCH_GUARD = 1e-12


@dataclass(frozen=True)
class PencilCubic:
    t1: Number
    t2: Number
    delta: float
    lead: float

    @property
    def t_sum(self) -> float:
        return float((self.t1 + self.t2).real)

    @property
    def t_prod(self) -> float:
        return float((self.t1 * self.t2).real)

    @property
    def is_pinched(self) -> bool:
        return abs(self.delta) < PINCH_GUARD * self.lead * self.lead


@dataclass(frozen=True)
class WeierstrassCurve:
    g2: float
    g3: float
    e1: float
    e2: Number
    e3: Number

    @property
    def roots(self) -> tuple[Number, Number, Number]:
        return self.e1, self.e2, self.e3

    @property
    def is_real(self) -> bool:
        return not isinstance(self.e2, complex)

    def scaled(self, lam: float) -> "WeierstrassCurve":
        """Curve with every branch point multiplied by ``lam``."""
        return WeierstrassCurve(
            self.g2 * lam**2, self.g3 * lam**3, self.e1 * lam, self.e2 * lam, self.e3 * lam
        )


@dataclass(frozen=True)
class PeriodData:
    omega1: float
    omega2: complex
    xi: float = math.nan
    nu: float = math.nan


class RealFormClass(str, enum.Enum):
    TWO_OVALS = "TwoOvals"
    PINCHED = "Pinched"
    ONE_OVAL = "OneOval"


@dataclass(frozen=True)
class JacobiReduction:
    prefactor: float
    argument: float
    kSquared: float
    # (1 - x^2, 1 - k^2 x^2) computed without cancellation, when known
    complements: tuple[float, float] | None = None

    def evaluate(self) -> float:
        return self.prefactor * incomplete_f(self.argument, self.kSquared, self.complements)


def delta_of(x0: float, r0: float, R: float) -> float:
    w = x0 * x0 - r0 * r0 - R * R
    return w * w - 4.0 * r0 * r0 * R * R


def pencil(x0: float, r0: float, R: float) -> PencilCubic:
    """Roots ``t1, t2`` of ``s^2 - (1 - (x0^2 - r0^2)/R^2) s + r0^2/R^2``."""
    tol = get_tolerances()
    if R <= 0:
        raise SingularPencilError("one-periodic: R = 0")
    if abs(r0) <= tol.boundary * max(1.0, R):
        raise SingularPencilError("two-periodic: r0 = 0")
    R2 = R * R
    S = 1.0 - (x0 * x0 - r0 * r0) / R2
    P = r0 * r0 / R2
    delta = delta_of(x0, r0, R)
    if delta >= 0:
        sq = math.sqrt(delta) / R2
        # larger-magnitude root first, the other from Vieta
        big = 0.5 * (S + math.copysign(sq, S)) if S != 0 else 0.5 * sq
        small = P / big
        t1, t2 = sorted((small, big))
    else:
        sq = math.sqrt(-delta) / R2
        t1 = complex(0.5 * S, -0.5 * sq)
        t2 = t1.conjugate()
    return PencilCubic(t1, t2, delta, R2)


def pencil_for(params: BilliardParams) -> PencilCubic:
    cd = params_caustic(params)
    return pencil(cd.x0, cd.r0, params.R)


def _real_if_close(z: complex) -> Number:
    return z.real if abs(z.imag) <= 1e-15 * max(1.0, abs(z)) else z


def weierstrass(pc: PencilCubic) -> WeierstrassCurve:
    s = pc.t_sum
    p = pc.t_prod
    b = s + 1.0
    c = s + p
    g2 = -4.0 * (c - b * b / 3.0)
    g3 = -4.0 * (2.0 * b**3 / 27.0 - b * c / 3.0 + p)
    e1 = (s - 2.0) / 3.0
    e2 = (pc.t1 + 1.0 - 2.0 * pc.t2) / 3.0
    e3 = (pc.t2 + 1.0 - 2.0 * pc.t1) / 3.0
    if isinstance(e2, complex):
        e2, e3 = _real_if_close(e2), _real_if_close(e3)
    return WeierstrassCurve(g2, g3, e1, e2, e3)


def real_form(params: BilliardParams) -> RealFormClass:
    """Topology of the real part of the curve, from the sign of delta."""
    cd = params_caustic(params)
    delta = delta_of(cd.x0, cd.r0, params.R)
    if abs(delta) < PINCH_GUARD * params.R**4:
        return RealFormClass.PINCHED
    return RealFormClass.TWO_OVALS if delta > 0 else RealFormClass.ONE_OVAL


def real_form_band(params: BilliardParams) -> RealFormClass | None:
    """Real form predicted from the R-band alone (None outside the bands)."""
    b = scenario_boundaries(params.aK, params.cK, params.a)
    R = params.R
    tol = get_tolerances().boundary * b["outer_tangency"]
    if abs(R - b["inner_tangency"]) <= tol:
        return RealFormClass.PINCHED
    if b["coincident"] < R < b["inner_tangency"]:
        return RealFormClass.TWO_OVALS
    if b["inner_tangency"] < R < b["outer_tangency"]:
        return RealFormClass.ONE_OVAL
    return None


# -- quadrature route --------------------------------------------------------


def invariant_tail(offsets: tuple[Number, Number, Number]) -> float:
    """``int_0^inf du / sqrt(4 prod(u + d_k))`` with ``u = s^2``, ``s = tan(theta)``.

    ``offsets`` are ``c - e_k``: real ones must be non-negative, complex ones
    must come as a conjugate pair.  This equals ``int_c^inf dt/sqrt(4t^3-g2 t-g3)``.
    """
    real = sorted(float(d.real) for d in offsets if not isinstance(d, complex) or d.imag == 0)
    cplx = [complex(d) for d in offsets if isinstance(d, complex) and d.imag != 0]
    if real and real[0] < -1e-13 * max(1.0, max(abs(x) for x in real)):
        raise ValueError("lower limit below a real branch point")
    dm = max(real[0], 0.0)
    if cplx:
        if len(cplx) != 2 or abs(cplx[0] - cplx[1].conjugate()) > 1e-12 * abs(cplx[0]):
            raise ValueError("complex offsets must be a conjugate pair")
        da = cplx[0]

        def rest(sn2, cs2):
            return abs(sn2 + da * cs2)

    else:
        da, db = real[1], real[2]

        def rest(sn2, cs2):
            return math.sqrt((sn2 + da * cs2) * (sn2 + db * cs2))

    def integrand(theta):
        sn, cs = math.sin(theta), math.cos(theta)
        sn2, cs2 = sn * sn, cs * cs
        if sn == 0.0:
            lead = 0.0 if dm > 0 else 1.0
        else:
            lead = sn / math.sqrt(sn2 + dm * cs2)
        return lead / rest(sn2, cs2)

    tol = get_tolerances().quad
    val, err, *info = integrate.quad(
        integrand, 0.0, 0.5 * math.pi, epsabs=tol, epsrel=1e-14, limit=400, full_output=1
    )
    if err > 10 * tol or (len(info) > 1 and info[1] != 0 and err > tol):
        raise QuadratureFailureError(f"quadrature error estimate {err:.3e}")
    return val


def tail_integral(wc: WeierstrassCurve, lower: float) -> float:
    """``int_lower^inf dt / sqrt(4 t^3 - g2 t - g3)`` by quadrature."""
    return invariant_tail(tuple(lower - e for e in wc.roots))


def head_integral(wc: WeierstrassCurve, upper: float) -> float:
    """``int_-inf^upper dt / sqrt(-(4 t^3 - g2 t - g3))`` for ``upper <= e1``."""
    return invariant_tail(tuple(e - upper for e in wc.roots))


def _check_curve(wc: WeierstrassCurve):
    e1, e2, e3 = wc.roots
    scale = max(abs(e1), abs(e2), abs(e3), 1e-300)
    if min(abs(e1 - e2), abs(e1 - e3), abs(e2 - e3)) <= 1e-10 * scale:
        raise SingularPencilError("pinched: merging branch points")


def periods(wc: WeierstrassCurve, delta_sign: int | None = None) -> PeriodData:
    """Real period ``omega1`` and the second lattice generator ``omega2``.

    ``delta > 0``: ``omega2`` is purely imaginary.  ``delta < 0``: the lattice is
    rhombic and ``omega2 = omega1/2 + i T`` where ``2 i T`` is the imaginary
    period, obtained from the rotated curve.
    """
    _check_curve(wc)
    if delta_sign is None:
        delta_sign = 1 if wc.is_real else -1
    if delta_sign > 0:
        if not wc.is_real:
            raise ValueError("delta > 0 needs three real branch points")
        half1 = tail_integral(wc, wc.e3)
        half2 = head_integral(wc, wc.e1)
        return PeriodData(2.0 * half1, complex(0.0, 2.0 * half2))
    half1 = tail_integral(wc, wc.e1)
    T = head_integral(wc, wc.e1)
    return PeriodData(2.0 * half1, complex(half1, T))


def shift_lower_limit(pc: PencilCubic) -> float:
    return (pc.t_sum + 1.0) / 3.0


def shift_and_frequency(wc: WeierstrassCurve, pc: PencilCubic) -> PeriodData:
    pd = periods(wc, 1 if pc.delta > 0 else -1)
    xi = tail_integral(wc, shift_lower_limit(pc))
    return PeriodData(pd.omega1, pd.omega2, xi, xi / pd.omega1)


def period_data_for(params: BilliardParams) -> PeriodData:
    pc = pencil_for(params)
    if pc.is_pinched:
        raise SingularPencilError("pinched: delta = 0")
    return shift_and_frequency(weierstrass(pc), pc)


def frequency(params: BilliardParams) -> float:
    return period_data_for(params).nu


def vertical_half_period(wc: WeierstrassCurve) -> complex:
    """``int_{e2}^{e3}`` along the vertical segment (delta < 0 only).

    With ``t = p + i q sin(theta)`` the endpoint singularities disappear.
    """
    if wc.is_real:
        raise ValueError("needs a complex-conjugate pair")
    p, q = wc.e3.real, wc.e3.imag
    c = p - wc.e1

    def branch(theta):
        y = q * math.sin(theta)
        w = cmath.sqrt(complex(c, y))
        return 1.0 / (2.0 * w)

    re, _ = integrate.quad(lambda th: branch(th).real, -0.5 * math.pi, 0.5 * math.pi, epsabs=1e-13)
    im, _ = integrate.quad(lambda th: branch(th).imag, -0.5 * math.pi, 0.5 * math.pi, epsabs=1e-13)
    # dt = i q cos(theta) dtheta cancels sqrt(q^2 - y^2) = q cos(theta)
    return 1j * complex(re, im)


# -- Jacobi / Carlson route --------------------------------------------------


def carlson_rf(x: Number, y: Number, z: Number) -> Number:
    """Carlson's symmetric integral ``R_F`` by the duplication algorithm.

    Real non-negative arguments (at most one zero) or arguments in the cut
    plane such as a conjugate pair plus a positive real.
    """
    xs = [complex(x), complex(y), complex(z)]
    is_real = all(v.imag == 0 and v.real >= 0 for v in xs)
    A0 = sum(xs) / 3.0
    Q = (3.0 * 2.0**-53) ** (-1.0 / 8.0) * max(abs(A0 - v) for v in xs)
    A = A0
    fac = 1.0
    for _ in range(100):
        if fac * Q < abs(A):
            break
        sx, sy, sz = (cmath.sqrt(v) for v in xs)
        lam = sx * sy + sx * sz + sy * sz
        xs = [(v + lam) / 4.0 for v in xs]
        A = (A + lam) / 4.0
        fac /= 4.0
    X = (A0 - complex(x)) * fac / A
    Y = (A0 - complex(y)) * fac / A
    Z = -(X + Y)
    E2 = X * Y - Z * Z
    E3 = X * Y * Z
    val = (
        1.0
        - E2 / 10.0
        + E3 / 14.0
        + E2 * E2 / 24.0
        - 3.0 * E2 * E3 / 44.0
        - 5.0 * E2**3 / 208.0
        + 3.0 * E3 * E3 / 104.0
        + E2 * E2 * E3 / 16.0
    ) / cmath.sqrt(A)
    return val.real if is_real else val


def incomplete_f(x: float, k2: float, complements: tuple[float, float] | None = None) -> float:
    """``F(x, k) = int_0^x ds / sqrt((1 - s^2)(1 - k^2 s^2))``, ``k2 = k^2``.

    ``complements`` may supply ``(1 - x^2, 1 - k^2 x^2)`` directly; near
    ``k x = 1`` the value is ill-conditioned in ``x`` alone.
    """
    if x == 0.0:
        return 0.0
    if complements is None:
        u, v = 1.0 - x * x, 1.0 - k2 * x * x
    else:
        u, v = complements
    if u < 0 or v < 0:
        if u > -1e-14 and v > -1e-14:
            u, v = max(u, 0.0), max(v, 0.0)
        else:
            raise BranchError(f"F(x, k) undefined for x={x!r}, k^2={k2!r}")
    return x * carlson_rf(u, v, 1.0)


def jacobi_reduce(lower: float, wc: WeierstrassCurve) -> JacobiReduction:
    """Shift ``t -> t - e1``, invert, then ``s^2``: a prefactor times ``F(x, k)``."""
    if not wc.is_real:
        raise BranchError("reduction needs three real branch points")
    e1, e2, e3 = wc.roots
    gap = e2 - e1
    if not gap > 0:
        raise BranchError("(e2 - e1)^(1/2) has no positive branch")
    if math.isinf(lower):
        return JacobiReduction(gap**-0.5, 0.0, (e1 - e3) / (e1 - e2))
    if lower < e3 and not math.isclose(lower, e3, rel_tol=1e-14, abs_tol=1e-15):
        raise BranchError("lower limit inside the bounded real oval")
    lower = max(lower, e3)
    span = lower - e1
    return JacobiReduction(
        gap**-0.5,
        math.sqrt(gap / span),
        (e1 - e3) / (e1 - e2),
        ((lower - e2) / span, (lower - e3) / span),
    )


def carlson_tail(wc: WeierstrassCurve, lower: float) -> float:
    """``int_lower^inf dt/sqrt(4 prod(t - e_k)) = R_F(lower - e1, lower - e2, lower - e3)``."""
    val = carlson_rf(*(lower - e for e in wc.roots))
    return float(val.real) if isinstance(val, complex) else float(val)
