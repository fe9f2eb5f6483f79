import pytest

from helpers import ACCEPTANCE_LINES, figure_eight


@pytest.fixture(scope="session")
def c():
    return figure_eight()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
