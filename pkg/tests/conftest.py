import os

import pytest

from scrollcy.scroll import ScrollData

HEAVY = os.environ.get("SCROLLCY_HEAVY") == "1"

ROWS = {
    1: (0, (0, 0, 0, 0, 0)), 2: (0, (0, 0, 0, 0, 1)), 3: (0, (0, 0, 0, 0, 2)),
    4: (0, (0, 0, 0, 1, 1)), 5: (1, (0, 0, 0, 0, 0)), 6: (1, (0, 0, 0, 0, 1)),
    7: (2, (0, 0, 0, 0, 0)), 8: (-3, (0, 0, 1, 2, 2)), 9: (-2, (0, 0, 0, 2, 2)),
    10: (-1, (0, 0, 0, 1, 1)), 11: (-1, (0, 0, 0, 1, 2)), 12: (-1, (0, 0, 1, 1, 1)),
}


def row(n: int) -> ScrollData:
    return ScrollData(*ROWS[n])


heavy = pytest.mark.skipif(not HEAVY, reason="set SCROLLCY_HEAVY=1 for heavy runs")


# one summary line per acceptance criterion, printed at the end of the run
_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.fixture
def detail(request):
    """Free-form notes shown next to the criterion's pass/fail line."""
    notes: list = []
    request.node.user_properties.append(("detail", notes))
    return notes


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        notes = next((v for k, v in item.user_properties if k == "detail"), [])
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _criteria[mark.args[0]] = (status, mark.args[1], list(notes))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        status, title, notes = _criteria[n]
        extra = f" [{'; '.join(notes)}]" if notes else ""
        terminalreporter.write_line(f"criterion {n}: {status} - {title}{extra}")
