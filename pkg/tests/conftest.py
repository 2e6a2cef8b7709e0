import math

import pytest

from retromaser import MaserParams

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def pi_params():
    return MaserParams(theta=math.pi, n_max=25)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
