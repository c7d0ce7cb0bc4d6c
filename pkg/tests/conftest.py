import pytest

_CRITERIA = []


@pytest.fixture(scope="session")
def criterion():
    """Record one acceptance verdict; all of them are echoed after the run."""

    def record(label, passed, detail):
        _CRITERIA.append((label, passed, detail))
        print(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in _CRITERIA:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")
