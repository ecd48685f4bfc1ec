"""
Configuration for pytest
"""
import os

import pytest

from engine.coefficients.limits import endpoint_limits
from engine.coefficients.model import CoefficientSet, EndpointAsymptotics, PowerLawMeta
from engine.wavespeed.shooting import cstar


def _meta(endpoint: int, d: tuple[float, float], rho: tuple[float, float]) -> EndpointAsymptotics:
    return EndpointAsymptotics(
        d=PowerLawMeta(constant=d[0], exponent=d[1], endpoint=endpoint),
        rho=PowerLawMeta(constant=rho[0], exponent=rho[1], endpoint=endpoint),
    )


@pytest.fixture(scope="session")
def fisher() -> CoefficientSet:
    """p = 2, f = 0, g = 1, d = 1, rho = u(1-u): c* = 2"""
    return CoefficientSet.from_expressions(
        p=2.0, f="0", g="1", d="1", rho="u*(1-u)",
        endpoint_meta_0=_meta(0, (1.0, 0.0), (1.0, 1.0)),
        endpoint_meta_1=_meta(1, (1.0, 0.0), (1.0, 1.0)),
    )


@pytest.fixture(scope="session")
def degenerate_fisher() -> CoefficientSet:
    """Same as fisher with d = u: c* = 1/sqrt(2)"""
    return CoefficientSet.from_expressions(
        p=2.0, f="0", g="1", d="u", rho="u*(1-u)",
        endpoint_meta_0=_meta(0, (1.0, 1.0), (1.0, 1.0)),
        endpoint_meta_1=_meta(1, (1.0, 0.0), (1.0, 1.0)),
    )


@pytest.fixture(scope="session")
def zero_drift_at_zero() -> CoefficientSet:
    """p = 2, f = -3u, g = 1, d = u^2, rho = u(1-u): ell0 = 0 and c* g(0) = f(0)"""
    return CoefficientSet.from_expressions(
        p=2.0, f="-3*u", g="1", d="u^2", rho="u*(1-u)",
        endpoint_meta_0=_meta(0, (1.0, 2.0), (1.0, 1.0)),
    )


@pytest.fixture(scope="session")
def fisher_limits(fisher):
    return endpoint_limits(fisher)


@pytest.fixture(scope="session")
def degenerate_limits(degenerate_fisher):
    return endpoint_limits(degenerate_fisher)


@pytest.fixture(scope="session")
def fisher_estimate(fisher, fisher_limits):
    """c* for Fisher, shared across tests (shooting is the slow part)"""
    return cstar(fisher, limits=fisher_limits)


@pytest.fixture(scope="session")
def degenerate_estimate(degenerate_fisher, degenerate_limits):
    return cstar(degenerate_fisher, limits=degenerate_limits)


@pytest.fixture(autouse=True)
def reset_environment():
    """Reset environment variables for each test"""
    original_env = os.environ.copy()
    yield
    os.environ.clear()
    os.environ.update(original_env)


def pytest_configure(config):
    """Configure pytest"""
    config.addinivalue_line(
        "markers", "integration: mark test as integration test (shoots for c*)"
    )
    config.addinivalue_line(
        "markers", "unit: mark test as unit test"
    )
