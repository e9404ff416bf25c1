import pytest

from hst_antenna_lab import table1_scenario

_acceptance = []


@pytest.fixture(scope="session")
def table1():
    return table1_scenario()


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        doc = report.user_properties and dict(report.user_properties).get("criterion")
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome, doc))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, doc in _acceptance:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {name}" + (f"  {doc}" if doc else ""))
