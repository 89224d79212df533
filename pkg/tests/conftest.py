import numpy as np
import pytest

from revival_lab.piecewise import BoxSpec, PolyBumpSpec, RampSpec, make_datum
from revival_lab.spectrum import BoundaryConditions

# parameter sets used throughout the suite
PP_NONCONSERVATIVE = dict(beta0=0.2, beta1=2.0)
PP_CONSERVATIVE = dict(beta0=0.2, beta1=5.0)
ROBIN_DIRICHLET = dict(beta11=-2, beta12=1, beta24=1)
ROBIN_DIRICHLET_IMAG = dict(beta11=-0.7, beta12=1, beta24=1)
UNSTABLE = dict(beta11=10, beta12=-13, beta13=2, beta14=-0.1, beta22=19, beta23=1, beta24=0.1)
SELF_ADJOINT = dict(beta11=5, beta12=0.5, beta13=1, beta22=0.2, beta24=1)
DISSIPATIVE = dict(beta11=-4, beta12=1j, beta24=1)


def pp(beta0, beta1, L=1.0):
    return BoundaryConditions.pseudoperiodic(beta0, beta1, L)


def gen(**betas):
    return BoundaryConditions.general(1.0, **betas)


@pytest.fixture
def pp2():
    return pp(**PP_NONCONSERVATIVE)


@pytest.fixture
def pp5():
    return pp(**PP_CONSERVATIVE)


@pytest.fixture
def robin():
    return gen(**ROBIN_DIRICHLET)


@pytest.fixture
def selfadjoint():
    return gen(**SELF_ADJOINT)


@pytest.fixture
def box():
    return make_datum(BoxSpec(0.375, 0.625))


@pytest.fixture
def bump():
    return make_datum(PolyBumpSpec(0.3, 0.7))


@pytest.fixture
def ramp():
    return make_datum(RampSpec())


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, title, detail = RESULTS[n]
        terminalreporter.write_line(f"ACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {title} ({detail})")
