import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from minbasis import DegreeProfile, from_polys

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# lambda as an entry is written [0, 1]; lambda**2 as [0, 0, 1]
EXAMPLE_M_ENTRIES = [
    [1, 0, 0, 0, 0, 0, 0],
    [0, 0, -1, [0, 1], 0, 0, 0],
    [0, 0, 0, -1, [0, 1], 0, 0],
    [0, 0, 0, 0, 0, -1, [0, 0, 1]],
]
EXAMPLE_N_ENTRIES = [
    [0, 1, 0, 0, 0, 0, 0],
    [0, 0, [0, 0, 1], [0, 1], 1, 0, 0],
    [0, 0, 0, 0, 0, [0, 0, 1], 1],
]

# T_2 of the 4 x 7 example, entry by entry as printed (blank = 0)
EXAMPLE_T2 = np.array([
    [1, 0, 0, 0, 0, 0, 0,    0, 0, 0, 0, 0, 0, 0],
    [0, 0, -1, 0, 0, 0, 0,   0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, -1, 0, 0, 0,   0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, -1, 0,   0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0,    1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0,    0, 0, -1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0,    0, 0, 0, -1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0,    0, 0, 0, 0, 0, -1, 0],
    [0, 0, 0, 0, 0, 0, 0,    0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0,    0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 1,    0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0,    0, 0, 0, 0, 0, 0, 1],
], dtype=float)

SUITE = ["1,1:1", "2,2:1,3", "4,3:0,1,1,2", "3,2:1,2,4", "2,5:2,2"]


@pytest.fixture
def example_m():
    return from_polys(DegreeProfile.from_mn(4, 3, (0, 1, 1, 2)), EXAMPLE_M_ENTRIES)


@pytest.fixture
def example_n():
    return from_polys(DegreeProfile((0, 2, 2), 7), EXAMPLE_N_ENTRIES)


@pytest.fixture
def one_lambda():
    """M = [1, lambda]."""
    return from_polys(DegreeProfile.from_mn(1, 1, (1,)), [[1, [0, 1]]])


@pytest.fixture
def lambda_lambda():
    """M = [lambda, lambda]: not a minimal basis (common root at 0)."""
    return from_polys(DegreeProfile.from_mn(1, 1, (1,)), [[[0, 1], [0, 1]]])


# -- acceptance reporting -----------------------------------------------------------

_VERDICTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "setup" and rep.passed:
        return
    detail = dict(item.user_properties).get("detail", "")
    _VERDICTS[mark.args[0]] = (mark.args[1], rep.passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_VERDICTS):
        title, passed, detail = _VERDICTS[number]
        line = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}"
        terminalreporter.write_line(f"{line}: {detail}" if detail else line)
