import pytest

from symrotor import RotorParams

# criterion id -> (outcome, detail), filled while the acceptance tests run
CRITERIA: dict[str, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id): test implementing an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    cid = marker.args[0]
    entry = CRITERIA.setdefault(cid, ["PASS", ""])
    if report.failed:
        entry[0] = "FAIL"
    detail = getattr(item, "criterion_detail", "")
    if detail:
        entry[1] = detail


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(CRITERIA, key=lambda c: int(c[1:])):
        status, detail = CRITERIA[cid]
        terminalreporter.write_line(f"{cid} {status}  {detail}")


@pytest.fixture
def params():
    return RotorParams()
