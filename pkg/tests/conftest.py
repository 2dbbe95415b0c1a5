import numpy as np
import pytest

from qnumrange.quaternion import QuatMatrix

_ACCEPTANCE_LINES: list[str] = []


def record_criterion(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_hermitian(n: int, rng) -> QuatMatrix:
    b = QuatMatrix.random(n, n, rng)
    return (b + b.adjoint()).scale(0.5)
