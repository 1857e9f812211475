import numpy as np
import pytest

from fracstab.spectral_model import dirichlet_laplacian, project, uniform_grid


@pytest.fixture(scope="session")
def fine_grid():
    return uniform_grid(4097)


@pytest.fixture(scope="session")
def heat_operator():
    """Unit-diffusivity Dirichlet operator, 64 modes."""
    return dirichlet_laplacian(1.0, 0.0, 64)


@pytest.fixture(scope="session")
def sine_state(heat_operator, fine_grid):
    return project(np.sin(np.pi * fine_grid), heat_operator)


@pytest.fixture(scope="session")
def parabola_state(heat_operator, fine_grid):
    return project(fine_grid * (fine_grid - 1.0), heat_operator)


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_report():
    """Record one PASS/FAIL line for an acceptance criterion (printed at the end of the run)."""

    def record(number, title, passed, detail=""):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
