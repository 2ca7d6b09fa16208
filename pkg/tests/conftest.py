import numpy as np
import pytest

from jackmoments.algebra import AlgebraTag, MatrixF

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_matrix(rng, m, n, beta):
    return MatrixF(rng.standard_normal((m, n, beta)), AlgebraTag(beta))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
