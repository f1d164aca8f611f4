import math

import pytest

from acoustic_qed.presets import diamond_spec

TWO_PI = 2 * math.pi
GHZ = TWO_PI * 1e9
MHZ = TWO_PI * 1e6


@pytest.fixture
def two_qubit_spec():
    return diamond_spec(2)


@pytest.fixture
def three_qubit_spec():
    return diamond_spec(3)


# one line per acceptance criterion, echoed at the end of the session
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[0][1:])):
            terminalreporter.write_line(line)
