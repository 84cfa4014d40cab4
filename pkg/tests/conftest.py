import numpy as np
import pytest

from weightedproj.numkernel import Subspace


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def span(*cols):
    """Subspace spanned by the given vectors (orthonormalized)."""
    return Subspace.span(np.array(cols, dtype=complex).T)


def e(i, n):
    v = np.zeros(n)
    v[i] = 1.0
    return v


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    def record(number, title, failures):
        status = "PASS" if not failures else "FAIL"
        line = f"[{status}] criterion {number:2d}: {title}"
        if failures:
            line += f" ({len(failures)} failures, first: {failures[0]})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert not failures, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
