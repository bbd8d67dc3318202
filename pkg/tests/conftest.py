import math

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from kepler_billiards.foci import BilliardParams

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

AK, CK = 2.0, 1.0


@pytest.fixture
def ref():
    """Reference wall (aK, cK) = (2, 1) at a = 4, R = 5."""
    return BilliardParams.ellipse(AK, CK, 4.0, 5.0)


@st.composite
def admissible_params(draw, aK=AK, cK=CK, margin=1e-3):
    """Interior admissible (a, R) on an elliptic wall."""
    a = draw(st.floats(0.5 * (aK - cK) + margin, 3.0 * aK, allow_nan=False))
    lo, hi = 2 * abs(a - aK), 2 * a + 2 * cK
    t = draw(st.floats(margin, 1 - margin))
    return BilliardParams.ellipse(aK, cK, a, lo + t * (hi - lo))


@st.composite
def nested_params(draw, aK=AK, cK=CK, margin=2e-2):
    """Case-1 parameters with the caustic strictly inside the foci circle."""
    a = draw(st.floats(0.5 * (aK + cK) + 0.2, 3.0 * aK))
    lo, hi = 2 * abs(a - aK), 2 * (a - cK)
    t = draw(st.floats(margin, 1 - margin))
    return BilliardParams.ellipse(aK, cK, a, lo + t * (hi - lo))


def close(x, y, tol):
    return abs(x - y) <= tol


SQRT7 = math.sqrt(7.0)


# -- acceptance report ----------------------------------------------------------

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k, title): numbered acceptance criterion")


def pytest_runtest_logreport(report):
    marks = getattr(report, "criterion", None)
    if marks is None:
        return
    k, title = marks
    failed = report.failed
    prev = _CRITERIA.get(k, (title, "PASS"))[1]
    if report.when == "call" or failed:
        _CRITERIA[k] = (title, "FAIL" if failed or prev == "FAIL" else "PASS")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        title, verdict = _CRITERIA[k]
        terminalreporter.write_line(f"{verdict} criterion {k:2d}: {title}")
