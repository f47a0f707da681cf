import pytest

_criteria = {}  # nodeid -> (number, title)
_outcomes = {}  # nodeid -> "PASS" | "FAIL"


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _criteria[item.nodeid] = mark.args


def pytest_runtest_logreport(report):
    if report.nodeid not in _criteria:
        return
    if report.when == "call" or report.failed:
        if report.failed or _outcomes.get(report.nodeid) != "FAIL":
            _outcomes[report.nodeid] = "FAIL" if report.failed else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (number, title) in sorted(_criteria.items(), key=lambda kv: kv[1][0]):
        if nodeid in _outcomes:
            terminalreporter.write_line(f"criterion {number}: {_outcomes[nodeid]}  {title}")


@pytest.fixture
def report_line(request):
    """Print a measured value next to the criterion result (visible with -s or on failure)."""

    def emit(text):
        print(f"[{request.node.name}] {text}")

    return emit
