import pytest

from pqkannan.oracle import random_spaces
from pqkannan.spaces import FiniteSpace, builtin_space


@pytest.fixture
def example():
    return builtin_space("paper_example")


@pytest.fixture
def punctured():
    return builtin_space("paper_example_punctured")


@pytest.fixture
def two_point():
    return FiniteSpace.from_matrix([[0, 1], [2, 0]], label="two_point")


@pytest.fixture(scope="session")
def small_spaces():
    return random_spaces(20, seed=7, max_n=4)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES):
            terminalreporter.write_line(line)
