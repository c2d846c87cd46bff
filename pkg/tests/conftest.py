import os
import random
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from macrospace import FiniteMetricSpace  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def to_space(dist, labels=None) -> FiniteMetricSpace:
    return FiniteMetricSpace.from_matrix(labels or list(range(len(dist))), dist)


def as_fractions(space: FiniteMetricSpace):
    n = space.size
    return [[space.d(i, j) for j in range(n)] for i in range(n)]


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def unit_line():
    return lambda m: FiniteMetricSpace.from_matrix(
        list(range(m)), [[Fraction(abs(a - b)) for b in range(m)] for a in range(m)]
    )


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
