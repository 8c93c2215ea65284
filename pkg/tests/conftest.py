import pytest

_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance_report(pytestconfig):
    """List that collects PASS/FAIL lines for the end-of-run summary."""
    return pytestconfig.stash.setdefault(_LINES, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
