import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from framedcurves import catalog
from framedcurves.curve import bishop_frame

settings.register_profile(
    "suite",
    max_examples=25,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

SQRT3 = math.sqrt(3.0)
DELTA = 1e-3
HALF_PIECE = (-math.pi / 2 + DELTA, math.pi / 2 - DELTA)


def chained_fd(jet_fn, t, k, h=1e-4):
    """k-th derivative as a central difference of the (k-1)-th derivative.

    ``jet_fn(t, order)`` returns a Jet (or JetVec3); only its order ``k-1``
    entry is used, evaluated at ``t +- h``.
    """
    lo = jet_fn(np.asarray(t - h), k - 1).d(k - 1)
    hi = jet_fn(np.asarray(t + h), k - 1).d(k - 1)
    return (hi - lo) / (2 * h)


def rel_err(a, b):
    a, b = np.asarray(a, float), np.asarray(b, float)
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(b)))))


@pytest.fixture(scope="session")
def nephroid():
    return catalog.nephroid()


@pytest.fixture(scope="session")
def astroid():
    return catalog.astroid()


@pytest.fixture(scope="session")
def circle():
    return catalog.circle()


@pytest.fixture(scope="session")
def line():
    return catalog.line()


@pytest.fixture(scope="session")
def nephroid_half():
    """Nephroid on the m-bar-free piece around 0 with its (Bishop) frame."""
    c = catalog.nephroid().restricted(HALF_PIECE)
    return c, bishop_frame(c)


# ---------------------------------------------------------------- acceptance report

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number k")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    k = mark.args[0]
    ok = rep.passed if rep.when == "call" else False
    _CRITERIA[k] = _CRITERIA.get(k, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {k}: {'PASS' if _CRITERIA[k] else 'FAIL'}")
