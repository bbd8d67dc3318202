import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kepler_billiards import elliptic as el
from kepler_billiards.errors import BranchError, SingularPencilError
from kepler_billiards.foci import BilliardParams, params_caustic

from . import oracles
from .conftest import SQRT7, admissible_params, nested_params


def pc_at(a, R):
    return el.pencil_for(BilliardParams.ellipse(2, 1, a, R))


def test_pencil_reference():
    pc = el.pencil(1.5, 1.0, 5.0)
    assert pc.t_sum == pytest.approx(0.95, abs=1e-12)
    assert pc.t_prod == pytest.approx(0.04, abs=1e-12)
    assert pc.delta == pytest.approx(464.0625, abs=1e-9)
    assert pc.t1 == pytest.approx(0.044158, abs=1e-6)
    assert pc.t2 == pytest.approx(0.905842, abs=1e-6)
    assert 0 < pc.t1 <= pc.t2


def test_pencil_transversal():
    pc = el.pencil(5.5, -7.0, 7.0)
    assert pc.t_prod == pytest.approx(1.0, abs=1e-12)
    assert pc.t_sum == pytest.approx(1.382653, abs=1e-6)
    assert pc.delta == pytest.approx(-5013.9375, abs=1e-9)
    assert isinstance(pc.t1, complex) and pc.t2 == pc.t1.conjugate()


def test_pencil_singular():
    with pytest.raises(SingularPencilError) as info:
        el.pencil(2.0, 0.0, 2 * SQRT7)
    assert "two-periodic" in info.value.degeneracy
    with pytest.raises(SingularPencilError) as info:
        el.pencil(2.0, 1.0, 0.0)
    assert "one-periodic" in info.value.degeneracy


@given(admissible_params())
def test_pencil_vieta_and_delta_factorisation(p):
    cd = params_caustic(p)
    x0, r0, R = cd.x0, cd.r0, p.R
    if abs(r0) < 1e-6:
        return
    pc = el.pencil(x0, r0, R)
    assert pc.t_prod == pytest.approx(r0 * r0 / (R * R), rel=1e-12, abs=1e-12)
    assert pc.t_sum == pytest.approx(1 - (x0 * x0 - r0 * r0) / (R * R), rel=1e-12, abs=1e-12)
    four = (x0 + r0 - R) * (x0 - r0 + R) * (x0 - r0 - R) * (x0 + r0 + R)
    assert pc.delta == pytest.approx(four, rel=1e-9, abs=1e-9 * R**4)


def test_delta_factorisation_sweep():
    rng = random.Random(11)
    for _ in range(1000):
        a = rng.uniform(0.6, 8.0)
        lo, hi = 2 * abs(a - 2), 2 * a + 2
        R = rng.uniform(lo, hi)
        cd = params_caustic(BilliardParams.ellipse(2, 1, a, R))
        x0, r0 = cd.x0, cd.r0
        four = (x0 + r0 - R) * (x0 - r0 + R) * (x0 - r0 - R) * (x0 + r0 + R)
        d = el.delta_of(x0, r0, R)
        assert d == pytest.approx(four, rel=1e-9, abs=1e-9 * R**4)


def test_weierstrass_reference():
    wc = el.weierstrass(el.pencil(1.5, 1.0, 5.0))
    assert wc.g2 == pytest.approx(1.11, abs=1e-10)
    assert wc.g3 == pytest.approx(0.217, abs=1e-10)
    assert wc.e1 == pytest.approx(-0.35, abs=1e-12)
    assert wc.e2 == pytest.approx(-0.255842, abs=1e-6)
    assert wc.e3 == pytest.approx(0.605842, abs=1e-6)
    assert abs(wc.e1 + wc.e2 + wc.e3) < 1e-12
    assert wc.e1 < wc.e2 < wc.e3
    # cross-check through the symmetric functions of the roots
    assert 4 * wc.e1 * wc.e2 * wc.e3 == pytest.approx(wc.g3, abs=1e-12)
    assert -4 * (wc.e1 * wc.e2 + wc.e1 * wc.e3 + wc.e2 * wc.e3) == pytest.approx(wc.g2, abs=1e-12)


def test_weierstrass_double_root():
    pc = el.PencilCubic(0.3, 0.3, 0.0, 1.0)
    wc = el.weierstrass(pc)
    assert wc.e2 == pytest.approx(wc.e3, abs=1e-15)


def test_weierstrass_complex_pair():
    wc = el.weierstrass(el.pencil(5.5, -7.0, 7.0))
    assert wc.e1 == pytest.approx(-0.205782, abs=1e-6)
    assert isinstance(wc.e2, complex) and wc.e3 == pytest.approx(wc.e2.conjugate())


@given(admissible_params(), st.lists(st.floats(-3, 3), min_size=5, max_size=5))
def test_weierstrass_polynomial_identity(p, ts):
    cd = params_caustic(p)
    if abs(cd.r0) < 1e-6:
        return
    wc = el.weierstrass(el.pencil(cd.x0, cd.r0, p.R))
    assert abs(sum(wc.roots)) < 1e-12
    for t in ts:
        lhs = 4 * t**3 - wc.g2 * t - wc.g3
        rhs = 4 * (t - wc.e1) * (t - wc.e2) * (t - wc.e3)
        assert abs(lhs - complex(rhs)) < 1e-9 * max(1.0, abs(lhs))


@pytest.mark.parametrize(
    "R, form",
    [(5.0, el.RealFormClass.TWO_OVALS), (6.0, el.RealFormClass.PINCHED), (7.0, el.RealFormClass.ONE_OVAL)],
)
def test_real_form(R, form):
    p = BilliardParams.ellipse(2, 1, 4, R)
    assert el.real_form(p) is form
    assert el.real_form_band(p) is form


def test_omega1_against_legendre_oracle():
    wc = el.weierstrass(el.pencil(1.5, 1.0, 5.0))
    pd = el.periods(wc)
    ref = oracles.half_period_ellipk(wc.e1, wc.e2, wc.e3)
    assert pd.omega1 / 2 == pytest.approx(ref, abs=1e-12)
    assert pd.omega1 == pytest.approx(3.297184824923105, abs=1e-12)
    assert pd.omega2.real == 0 and pd.omega2.imag > 0


def test_shift_reference():
    p = BilliardParams.ellipse(2, 1, 4, 5)
    pc = el.pencil_for(p)
    wc = el.weierstrass(pc)
    lower = el.shift_lower_limit(pc)
    assert lower == pytest.approx(0.65, abs=1e-14)
    assert lower - wc.e3 == pytest.approx(pc.t1, abs=1e-14)
    pd = el.period_data_for(p)
    assert pd.xi == pytest.approx(oracles.tail_ellipkinc(lower, wc.e1, wc.e2, wc.e3), abs=1e-12)
    assert pd.nu == pytest.approx(pd.xi / pd.omega1)
    assert 0 < pd.xi < pd.omega1 / 2


def test_shift_lower_limit_transversal():
    pc = pc_at(4, 7)
    wc = el.weierstrass(pc)
    assert el.shift_lower_limit(pc) - wc.e1 == pytest.approx(1.0, abs=1e-14)


def test_rhombic_lattice():
    wc = el.weierstrass(pc_at(4, 7))
    pd = el.periods(wc)
    assert (pd.omega2 / pd.omega1).real == pytest.approx(0.5, abs=1e-9)
    assert pd.omega2.imag > 0
    # the imaginary half-period equals the vertical path from e2 to e3
    v = el.vertical_half_period(wc)
    assert abs(abs(v.imag) - pd.omega2.imag) < 1e-9


@given(st.floats(0.2, 5.0))
def test_scaling_covariance(lam):
    wc = el.weierstrass(el.pencil(1.5, 1.0, 5.0))
    base = el.periods(wc)
    sc = el.periods(wc.scaled(lam))
    assert sc.omega1 == pytest.approx(base.omega1 * lam**-0.5, abs=1e-9)
    assert sc.omega2.imag == pytest.approx(base.omega2.imag * lam**-0.5, abs=1e-9)


@given(nested_params())
def test_quadrature_matches_jacobi_reduction(p):
    try:
        pc = el.pencil_for(p)
    except SingularPencilError:  # drew R = R2 exactly
        return
    if pc.is_pinched or not pc.delta > 0:
        return
    wc = el.weierstrass(pc)
    half = el.tail_integral(wc, wc.e3)
    assert el.jacobi_reduce(wc.e3, wc).evaluate() == pytest.approx(half, abs=1e-9)
    lower = el.shift_lower_limit(pc)
    xi = el.tail_integral(wc, lower)
    assert el.jacobi_reduce(lower, wc).evaluate() == pytest.approx(xi, abs=1e-9)
    assert el.carlson_tail(wc, lower) == pytest.approx(xi, abs=1e-9)
    assert half > 0 and xi > 0


def test_jacobi_modulus_and_limits():
    wc = el.weierstrass(el.pencil(1.5, 1.0, 5.0))
    jr = el.jacobi_reduce(wc.e3, wc)
    assert jr.kSquared == pytest.approx((wc.e1 - wc.e3) / (wc.e1 - wc.e2))
    inf = el.jacobi_reduce(math.inf, wc)
    assert inf.argument == 0.0 and inf.evaluate() == 0.0
    assert el.jacobi_reduce(1e12, wc).evaluate() < 1e-5
    with pytest.raises(BranchError):
        el.jacobi_reduce(0.0, wc)
    with pytest.raises(BranchError):
        el.jacobi_reduce(1.0, el.weierstrass(pc_at(4, 7)))


@given(
    st.floats(0.0, 10.0),
    st.floats(1e-3, 10.0),
    st.floats(1e-3, 10.0),
)
def test_carlson_rf_against_scipy(x, y, z):
    assert el.carlson_rf(x, y, z) == pytest.approx(oracles.rf(x, y, z), rel=1e-13)


def test_carlson_rf_complex_pair():
    from scipy.special import elliprf

    z = complex(0.4, 1.3)
    got = el.carlson_rf(z, z.conjugate(), 2.0)
    ref = complex(elliprf(z, z.conjugate(), 2.0))
    assert abs(got - ref) < 1e-13


def test_torsion():
    n1 = el.frequency(BilliardParams.ellipse(2, 1, 4, 4.5))
    n2 = el.frequency(BilliardParams.ellipse(2, 1, 4, 5.5))
    assert abs(n1 - n2) > 1e-6


def test_pinched_guard():
    with pytest.raises(SingularPencilError):
        el.period_data_for(BilliardParams.ellipse(2, 1, 4, 6))


@given(admissible_params())
def test_sign_facts(p):
    pc = el.pencil_for(p) if abs(params_caustic(p).r0) > 1e-6 else None
    if pc is None or pc.is_pinched or abs(pc.delta) < 1e-6 * p.R**4:
        return
    pd = el.period_data_for(p)
    assert pd.omega1 > 0 and pd.xi > 0
