import pytest

from permpqc import perm_core

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(autouse=True, scope="session")
def _debug_checks():
    perm_core.DEBUG_CHECKS = True
    yield
    perm_core.DEBUG_CHECKS = False


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
