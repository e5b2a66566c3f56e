import numpy as np
import pytest

from whsketch import make_rng


@pytest.fixture
def rng():
    return make_rng(20240611)


def kron_hadamard(n):
    """Normalized Hadamard matrix by repeated Kronecker products of H_2."""
    h2 = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    h = np.ones((1, 1))
    while h.shape[0] < n:
        h = np.kron(h, h2)
    return h


ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: int(k[1:])):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
