import random
from fractions import Fraction

import pytest

from ccp import from_values

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def pop4():
    return from_values([Fraction(1, 10), Fraction(2, 10), Fraction(3, 10), Fraction(4, 10)])


@pytest.fixture
def pop4_float():
    return from_values([0.1, 0.2, 0.3, 0.4])


@pytest.fixture
def rng():
    return random.Random(20240613)
