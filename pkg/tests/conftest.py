import numpy as np
import pytest

from qpdkit import ccr, su2


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def ccr40():
    """N=40 plane backend on the standard 128x128 grid over [-5, 5)^2."""
    return ccr.CcrPhaseSpace(ccr.CcrSystem(40), ccr.PlanarGrid(5.0, 128), ccr.PlanarSpectrum(6.0))


@pytest.fixture(scope="session", params=[0.5, 1.0, 2.0], ids=["j=1/2", "j=1", "j=2"])
def spin_space(request):
    return su2.SpinPhaseSpace(su2.SpinSystem(request.param))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
