import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kepler_billiards.errors import (
    NoRealChordError,
    NoRealR2Error,
    ParabolicWallError,
    UnsupportedCombinationError,
)
from kepler_billiards.foci import (
    SIGN_TABLE,
    BilliardParams,
    ScenarioClass,
    admissible,
    caustic,
    chord_endpoints,
    chord_line_at,
    classify,
    params_caustic,
    r2_radius,
    reflection_geometry,
    scenario_boundaries,
)
from kepler_billiards.geometry import OrbitKind, WallKind, point_line_distance

from . import oracles
from .conftest import SQRT7, admissible_params

E = WallKind.ELLIPSE


def cd_for(a, R, aK=2.0, cK=1.0):
    return caustic(E, OrbitKind.ELLIPTIC, aK, cK, a, R)


@pytest.mark.parametrize(
    "a, R, x0, r0",
    [(4, 5, 1.5, 1.0), (4, 4, 0.0, 4.0), (4, 6, 10 / 3, -8 / 3), (2, 0, 0.0, 0.0)],
)
def test_caustic_examples(a, R, x0, r0):
    cd = cd_for(a, R)
    assert cd.x0 == pytest.approx(x0, abs=1e-14)
    assert cd.r0 == pytest.approx(r0, abs=1e-14)


@given(admissible_params())
def test_caustic_matches_direct_formula(p):
    cd = params_caustic(p)
    x0, r0 = oracles.caustic_ee(p.aK, p.cK, p.a, p.R)
    assert cd.x0 == pytest.approx(x0, rel=1e-12, abs=1e-12)
    assert cd.r0 == pytest.approx(r0, rel=1e-12, abs=1e-12)


def test_inner_tangency_closed_forms():
    aK, cK, a = 2.0, 1.0, 4.0
    cd = cd_for(a, 2 * (a - cK))
    assert cd.r0 == pytest.approx(2 * a * (cK - aK) / (aK + cK), abs=1e-14)
    assert cd.x0 == pytest.approx(2 * cK * (2 * a - aK - cK) / (aK + cK), abs=1e-14)
    assert cd.x0 - cd.r0 == pytest.approx(6.0, abs=1e-13)


def test_parabolic_wall_has_no_caustic():
    with pytest.raises(ParabolicWallError):
        caustic(WallKind.PARABOLA, OrbitKind.ELLIPTIC, 0.0, 0.0, 4.0, 5.0)


def test_unsupported_combination():
    # elliptic wall, orbit branch near F': C = 2(aK - a) - B is never positive when a > aK
    with pytest.raises(UnsupportedCombinationError):
        caustic(E, OrbitKind.HYPERBOLIC_NEAR_FPRIME, 2.0, 1.0, 4.0, 5.0)


def test_sign_table_is_complete():
    assert len(SIGN_TABLE) == 9
    for (w, o), (s, alpha, beta) in SIGN_TABLE.items():
        assert s in (-1, 1) and alpha in (-1, 1) and beta in (-1, 1)


BRANCH = {
    WallKind.HYPERBOLA_NEAR_FPRIME: "near_fprime",
    WallKind.HYPERBOLA_NEAR_F: "near_f",
}
ORBIT = {
    OrbitKind.ELLIPTIC: "elliptic",
    OrbitKind.HYPERBOLIC_NEAR_F: "near_f",
    OrbitKind.HYPERBOLIC_NEAR_FPRIME: "near_fprime",
}


def _mirror_checks(wall, orbit, aK, cK, a, R, pts, Fk):
    try:
        cd = caustic(wall, orbit, aK, cK, a, R)
    except UnsupportedCombinationError:
        # the oracle must agree that no wall point has a positive |P F_i|
        for P in pts:
            A = float(np.linalg.norm(P - Fk))
            assert oracles.orbit_focal_distance(ORBIT[orbit], A, a) <= 1e-12
        return 0
    checked = 0
    for P in pts:
        A = float(np.linalg.norm(P - Fk))
        C = oracles.orbit_focal_distance(ORBIT[orbit], A, a)
        if C <= 0:
            continue
        pair = oracles.mirrored_chord(P, C, R)
        if pair is None:
            continue
        F1, F2 = pair
        if np.linalg.norm(F1 - F2) < 1e-6:
            continue
        scale = max(1.0, R, C)
        assert oracles.line_distance(F1, F2, (cd.x0, 0.0)) == pytest.approx(abs(cd.r0), abs=1e-9 * scale)
        checked += 1
    return checked


@pytest.mark.parametrize("orbit", list(OrbitKind))
@pytest.mark.parametrize("wall", [E, WallKind.HYPERBOLA_NEAR_FPRIME, WallKind.HYPERBOLA_NEAR_F])
def test_nine_cases_against_mirror_construction(wall, orbit):
    """Chords built by mirroring across F'P are tangent to the tabulated circle."""
    if wall is E:
        aK, cK = 2.0, 1.0
        pts = [oracles.ellipse_point(aK, cK, t) for t in np.linspace(-2.8, 2.8, 15)]
    else:
        aK, cK = 1.0, 2.0
        pts = [oracles.hyperbola_point(BRANCH[wall], aK, cK, t) for t in np.linspace(-1.5, 1.5, 15)]
    Fk = np.array([-2 * cK, 0.0])
    checked = 0
    for a in (0.3, 0.7, 1.5, 3.0, 5.0):
        for R in (0.5, 1.9, 4.0, 7.0, 12.0):
            checked += _mirror_checks(wall, orbit, aK, cK, a, R, pts, Fk)
    assert checked >= 3


@pytest.mark.parametrize(
    "a, R, ok", [(4, 5, True), (4, 11, False), (0.4, 1, False), (4, 4, True), (4, 10, True)]
)
def test_admissible(a, R, ok):
    assert admissible(BilliardParams.ellipse(2, 1, a, R)) is ok


def test_admissible_requires_elliptic_wall():
    from kepler_billiards.geometry import ConicWall

    with pytest.raises(ValueError):
        admissible(BilliardParams(ConicWall.parabola(1.0), 4.0, 1.0))


@pytest.mark.parametrize(
    "a, R, cls",
    [
        (4, 5, ScenarioClass.CAUSTIC_INSIDE),
        (4, 2 * SQRT7, ScenarioClass.TWO_PERIODIC_POINT),
        (4, 7, ScenarioClass.TRANSVERSAL),
        (1.2, 3, ScenarioClass.TRANSVERSAL),
        (4, 4, ScenarioClass.COINCIDENT_CIRCLES),
        (4, 6, ScenarioClass.INNER_TANGENCY),
        (4, 10, ScenarioClass.OUTER_TANGENCY),
        (4, 11, ScenarioClass.INADMISSIBLE),
    ],
)
def test_classify(a, R, cls):
    assert classify(BilliardParams.ellipse(2, 1, a, R)) is cls


def test_r2_radius():
    assert r2_radius(2, 1, 4) == pytest.approx(2 * SQRT7, abs=1e-14)
    assert abs(cd_for(4, r2_radius(2, 1, 4)).r0) < 1e-12
    assert r2_radius(2, 1, 2) == 0.0
    with pytest.raises(NoRealR2Error):
        r2_radius(2, 1, 1.2)


@given(st.floats(2.001, 10.0))
def test_boundary_ordering(a):
    b = scenario_boundaries(2.0, 1.0, a)
    assert b["coincident"] < b["R2"] < b["inner_tangency"] < b["outer_tangency"]
    assert abs(cd_for(a, b["R2"]).r0) < 1e-12 * max(1.0, a)


@pytest.mark.parametrize("a", [1.5, 1.75, 1.99])
def test_no_point_caustic_below_aK(a):
    # Case 1 with a < aK: r0 < 0 on the whole admissible range
    b = scenario_boundaries(2.0, 1.0, a)
    assert "R2" not in b
    for R in np.linspace(b["coincident"], b["outer_tangency"], 50):
        assert cd_for(a, R).r0 < 0


@given(admissible_params())
def test_x0_positive(p):
    if p.R > 2 * abs(p.a - p.aK):
        assert params_caustic(p).x0 > 0


def test_chord_example():
    p = BilliardParams.ellipse(2, 1, 4, 5)
    line, geo = chord_line_at(p, math.pi / 2)
    assert line.k == pytest.approx(1.0)
    assert line.phi == pytest.approx(math.pi / 2)
    assert geo.B1 == pytest.approx(1.5) and geo.C1 == pytest.approx(5.5)
    assert geo.h == pytest.approx(2 * math.sqrt(6))
    assert point_line_distance((1.5, 0), line) == pytest.approx(1.0)
    for q in chord_endpoints(line, geo):
        assert q.x**2 + q.y**2 == pytest.approx(25.0)
        assert q.y == pytest.approx(-1.0)


def test_no_real_chord():
    # near outer tangency most reflection angles admit no chord
    p = BilliardParams.ellipse(2, 1, 4, 9.99)
    with pytest.raises(NoRealChordError):
        reflection_geometry(p, 0.0)


@given(admissible_params(), st.floats(-math.pi, math.pi))
def test_chord_tangency_and_triangle_identities(p, phi):
    try:
        line, geo = chord_line_at(p, phi)
    except NoRealChordError:
        return
    cd = params_caustic(p)
    assert point_line_distance(cd.center, line) == pytest.approx(abs(cd.r0), abs=1e-10 * max(1, p.R))
    assert geo.k**2 + geo.h**2 == pytest.approx(p.R**2, abs=1e-10 * max(1, p.R**2))
    assert (geo.B1 + geo.k) ** 2 + geo.h**2 == pytest.approx(geo.C1**2, abs=1e-10 * max(1, geo.C1**2))
    assert geo.A1 + geo.B1 == pytest.approx(2 * p.aK)


def test_rprime():
    assert BilliardParams.ellipse(2, 1, 4, 5).RPrime == pytest.approx(-3.0)
