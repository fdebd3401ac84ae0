import numpy as np
import pytest

from stressdesign import Configuration, regular_polygon

# side edges (0,1), (0,3), (1,2), (2,3) get +1, diagonals (0,2), (1,3) get -1
SQUARE_PATTERN = np.array([1.0, -1.0, 1.0, 1.0, -1.0, 1.0])
SQUARE_Q = np.array([1.0, -1.0, 1.0, -1.0])


@pytest.fixture
def square():
    return Configuration.from_points([[1, 1], [-1, 1], [-1, -1], [1, -1]])


@pytest.fixture(scope="session")
def decagon():
    return regular_polygon(10, 1.0)


def random_affine(rng, d=2):
    while True:
        A = rng.standard_normal((d, d))
        if abs(np.linalg.det(A)) > 0.1:
            return A, rng.standard_normal((d, 1))


ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
