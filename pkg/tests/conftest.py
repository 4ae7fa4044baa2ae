import pytest

from ermakov import fock_oracle as fock
from ermakov.mode_solver import evolve, vacuum_init
from ermakov.profiles import ReferenceParams, quench


@pytest.fixture(scope="session")
def squeezing_unitary():
    """Truncated U(3) for a quench that changes all of X, Y, Z."""
    prof = quench((1.0, 0.3, 1.2), (1.6, -0.2, 2.5), t_c=1.5, tau=0.5)
    ref = ReferenceParams.from_profile(prof, 0.0)
    U = fock.evolution_operator(prof, ref, 90, 3.0, 5e-4)
    state = evolve(prof, vacuum_init(prof, ref), 3.0, 1e-4)
    return prof, ref, U, state


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance line and fail the test if the criterion is not met."""

    def check(label, value, tol, ok=None):
        ok = value <= tol if ok is None else ok
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {value:.3e} (tolerance {tol:.1e})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
