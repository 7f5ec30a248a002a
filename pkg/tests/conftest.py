import pytest

ACCEPTANCE_LINES = []


def pytest_addoption(parser):
    parser.addoption("--run-expensive", action="store_true", default=False, help="run rank-3 and other slow checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-expensive"):
        return
    skip = pytest.mark.skip(reason="needs --run-expensive")
    for item in items:
        if "expensive" in item.keywords:
            item.add_marker(skip)


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else "FAIL"
    ACCEPTANCE_LINES.append(f"{status} {name} ({report.duration:.2f}s)")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
