import pytest

from pairblockade.hilbert import HilbertDims
from pairblockade.lindblad import build_liouvillian, standard_channels, steady_state
from pairblockade.model import build_hamiltonian, paper_defaults, with_interference


@pytest.fixture(scope="session")
def dims5():
    return HilbertDims(5, 5)


@pytest.fixture(scope="session")
def blue_point(dims5):
    """Blue sideband, U_a/g = 2, interference optimum: (p, d, L, rho_s)."""
    p, d = paper_defaults(u_a=4.0, delta_a=-1.0)
    p = with_interference(p, d)
    lv = build_liouvillian(build_hamiltonian(p, dims5), standard_channels(dims5, d))
    return p, d, lv, steady_state(lv)


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion, then assert it."""

    def record(number: int, title: str, passed: bool, measured: str):
        ACCEPTANCE_LINES[number] = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {title}: {measured}"
        print(ACCEPTANCE_LINES[number])
        assert passed, measured

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
