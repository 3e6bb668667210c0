import numpy as np
import pytest
from hypothesis import strategies as st

from eiglocus import ComplexMatrix, load_fixture

# eigenvalues of the example31.json fixture, computed once with the Durand-Kerner oracle and
# cross-checked against numpy.linalg.eigvals (agreement to ~1e-14).
EXAMPLE31_EIGENVALUES = (
    -6.6904343016953245 + 0.5396713590889124j,
    7.01972446181934 - 0.999652923967084j,
    13.033252770090936 + 0.9920778748835019j,
    30.637457069785057 - 0.5320963100053309j,
)


@pytest.fixture(scope="session")
def example31():
    return load_fixture("example31.json")


@pytest.fixture(scope="session")
def flip():
    return ComplexMatrix([[0, 1], [1, 0]])


@pytest.fixture(scope="session")
def diag():
    return ComplexMatrix([[1, 0, 0], [0, 2 + 0.5j, 0], [0, 0, -1]])


coords = st.floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, coords, coords)


@st.composite
def matrices(draw, min_n=2, max_n=5):
    n = draw(st.integers(min_n, max_n))
    entries = draw(st.lists(complexes, min_size=n * n, max_size=n * n))
    return ComplexMatrix(np.array(entries, dtype=complex).reshape(n, n))


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
