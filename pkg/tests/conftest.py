from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from pary.func import PFunc
from pary.gf import field_new

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def f9():
    return field_new(3, 2, [1, 0, 1])


@pytest.fixture(scope="session")
def f27():
    # x^3 - x - 1
    return field_new(3, 3, [2, 2, 0, 1])


@pytest.fixture(scope="session")
def f81():
    return field_new(3, 4)


def random_func(field, rng, zero_at_origin=True) -> PFunc:
    vals = rng.integers(0, field.p, size=field.q)
    if zero_at_origin:
        vals[0] = 0
    return PFunc(field, vals)


def invariant_func(field, rng) -> PFunc:
    """Random f with f(a x) = f(x) for a in F_p^*: constant on F_p^*-orbits."""
    vals = np.full(field.q, -1, dtype=np.int64)
    vals[0] = 0
    for x in range(1, field.q):
        if vals[x] >= 0:
            continue
        orbit = field.mul_vec(np.arange(1, field.p), x)
        vals[orbit] = rng.integers(0, field.p)
    return PFunc(field, vals)


# -- acceptance reporting: one PASS/FAIL line per criterion ------------------

_CRITERIA: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    n, title = mark.args
    _CRITERIA[n] = ("PASS" if rep.passed else "FAIL", title, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        verdict, title, secs = _CRITERIA[n]
        terminalreporter.write_line(f"{verdict} criterion {n}: {title} ({secs:.2f} s)")
