import math

import pytest

from stepoptions import MarketParams

LN90, LN130 = math.log(90.0), math.log(130.0)


@pytest.fixture
def mp():
    return MarketParams(r=0.05, sigma=0.3)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[2].rstrip(':'))):
            terminalreporter.write_line(line)
