import numpy as np
import pytest
from hypothesis import strategies as st

from csbundle.lie import SU2Element, Su2Vector


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
vectors = st.lists(finite, min_size=3, max_size=3).map(Su2Vector)
quaternions = (
    st.lists(st.floats(-1, 1, allow_nan=False), min_size=4, max_size=4)
    .filter(lambda q: np.linalg.norm(q) > 1e-3)
    .map(SU2Element)
)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


_criteria: dict = {}


def pytest_runtest_logreport(report):
    if report.when not in ("setup", "call"):
        return
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    prev = _criteria.get(crit, "PASS")
    _criteria[crit] = "PASS" if prev == "PASS" and report.passed else "FAIL"


@pytest.fixture(autouse=True)
def _tag_criterion(request):
    mark = request.node.get_closest_marker("criterion")
    if mark is not None:
        request.node.user_properties.append(("criterion", mark.args))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), status in sorted(_criteria.items()):
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
