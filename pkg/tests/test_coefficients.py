"""
Unit Tests for coefficient sets, endpoint limits and hypotheses
"""
import math

import numpy as np
import pytest
from pydantic import ValidationError

from engine.coefficients.limits import (
    Convergence,
    chain_condition,
    endpoint_limits,
    exponent_rule,
    extrapolate_limit,
    power_fit,
)
from engine.coefficients.model import CoefficientSet, EndpointAsymptotics, LimitConfidence
from engine.coefficients.validation import lobatto_grid, running_integral, validate_hypotheses
from engine.errors import FitFailed, OscillatingLimit

pytestmark = pytest.mark.unit


def test_derived_quantities(degenerate_fisher):
    """Test q, h, drift and the analytic h exponent"""
    cs = degenerate_fisher
    assert cs.q == pytest.approx(1.0)
    assert cs.h(0.5) == pytest.approx(0.125)
    assert cs.drift(0.7, 0.3) == pytest.approx(0.7)
    assert cs.h_exponent(0) == (1.0, 2.0)
    assert cs.without_metadata().h_exponent(0) is None


def test_rejects_p_at_most_one():
    """Test the p > 1 constraint"""
    with pytest.raises(ValidationError):
        CoefficientSet.from_expressions(p=1.0, f="0", g="1", d="1", rho="u*(1-u)")


def test_syntax_error_surfaces_as_validation_error():
    """Test that a bad expression fails model validation"""
    with pytest.raises(ValidationError, match="offset"):
        CoefficientSet.from_expressions(p=2.0, f="0", g="1", d="1", rho="u*(1-u")


def test_analytic_limits_fisher(fisher_limits):
    """Test limits taken from power-law descriptors"""
    assert fisher_limits.ell0.value == pytest.approx(1.0)
    assert fisher_limits.ell0.confidence == LimitConfidence.ANALYTIC
    assert fisher_limits.ell1.value == pytest.approx(1.0)
    assert fisher_limits.d_at_0.value == pytest.approx(1.0)
    assert fisher_limits.ddot_0.is_infinite


def test_analytic_limits_degenerate(degenerate_limits):
    """Test limits when d vanishes linearly at 0"""
    assert degenerate_limits.ell0.is_zero
    assert degenerate_limits.d_at_0.is_zero
    assert degenerate_limits.ddot_0.value == pytest.approx(1.0)
    assert degenerate_limits.h0 == degenerate_limits.ell0


def test_extrapolated_limits_match_analytic(fisher):
    """Test numeric limits on the bare expressions"""
    limits = endpoint_limits(fisher.without_metadata())
    assert limits.ell0.confidence == LimitConfidence.EXTRAPOLATED
    assert limits.ell0.value == pytest.approx(1.0, rel=1e-6)
    assert limits.ell1.value == pytest.approx(1.0, rel=1e-6)
    assert limits.d_at_1.value == pytest.approx(1.0)


def test_infinite_ell0_detected():
    """Test a reaction too strong at 0"""
    cs = CoefficientSet.from_expressions(p=2.0, f="0", g="1", d="1", rho="sqrt(u)*(1-u)")
    assert endpoint_limits(cs).ell0.is_infinite


def test_oscillating_limit_raises():
    """Test that an undecided limit raises in strict mode"""
    with pytest.raises(OscillatingLimit):
        extrapolate_limit(lambda u: np.where(np.round(-np.log2(u)) % 2 == 0, 1.0, 4.0), 0)


def test_power_fit():
    """Test exact and approximate power fits"""
    fit = power_fit(lambda u: 3.0 * u**1.5, 0)
    assert fit.exact
    assert fit.exponent == pytest.approx(1.5)
    assert fit.constant == pytest.approx(3.0)

    near_one = power_fit(lambda u: (1.0 - u) ** 0.5 * (1.0 + u), 1)
    assert near_one.exponent == pytest.approx(0.5, abs=1e-3)

    with pytest.raises(FitFailed, match="non-positive"):
        power_fit(lambda u: -u, 0)


def test_exponent_rule():
    """Test the convergence rule with its margin"""
    assert exponent_rule(-0.5, exact=True) == Convergence.CONVERGENT
    assert exponent_rule(-1.0, exact=True) == Convergence.DIVERGENT
    assert exponent_rule(-1.0002, exact=False) == Convergence.UNDECIDED
    assert exponent_rule(-1.01, exact=False) == Convergence.DIVERGENT


def test_chain_condition(fisher):
    """Test the chain condition flag and its detection"""
    assert chain_condition(fisher, 0)
    assert chain_condition(fisher.without_metadata(), 0)
    flagged = fisher.model_copy(update={"endpoint_meta_0": EndpointAsymptotics(chain_condition=False)})
    assert not chain_condition(flagged, 0)


def test_hypotheses_pass_for_fisher(fisher):
    """Test that the classical problem satisfies every hypothesis"""
    report = validate_hypotheses(fisher, grid_size=256)
    assert report.all_passed
    assert [check.name for check in report.checks] == ["rho", "g", "d"]


def test_rho_sign_change_located():
    """Test that a sign change of rho is located"""
    cs = CoefficientSet.from_expressions(p=2.0, f="0", g="1", d="1", rho="u*(1-u)*(u-0.5)")
    check = validate_hypotheses(cs, grid_size=256).check("rho")
    assert not check.passed
    # Negative on all of (0, 1/2): the first interior grid point already fails
    assert check.first_violation == lobatto_grid(256)[0]


def test_interior_sign_change_located():
    """Test that a sign change inside (0, 1) is reported where it happens"""
    cs = CoefficientSet.from_expressions(p=2.0, f="0", g="1", d="1", rho="u*(1-u)*(0.25-u)")
    check = validate_hypotheses(cs, grid_size=256).check("rho")
    assert not check.passed
    assert check.first_violation == pytest.approx(0.25, abs=1e-2)
    assert check.first_violation >= 0.25


def test_grid_size_minimum(fisher):
    """Test that grids below 16 intervals are rejected"""
    with pytest.raises(ValueError, match="grid_size must be at least 16"):
        validate_hypotheses(fisher, grid_size=8)
    assert validate_hypotheses(fisher, grid_size=16).grid_size == 16


def test_validation_is_deterministic():
    """Test that the same input gives the same report"""
    cs = CoefficientSet.from_expressions(p=2.0, f="0", g="u-0.5", d="u-0.25", rho="u*(1-u)*(0.25-u)")
    assert validate_hypotheses(cs, grid_size=64) == validate_hypotheses(cs, grid_size=64)


@pytest.mark.parametrize("rho", ["u*(1-u)*(0.25-u)", "u*(1-u)*(u-0.5)", "u*(1-u)*(u-0.001)"])
def test_refined_grid_keeps_failures(rho):
    """Test that a failure on a grid persists on the refined grid, no later than before"""
    cs = CoefficientSet.from_expressions(p=2.0, f="0", g="1", d="1", rho=rho)
    coarse = validate_hypotheses(cs, grid_size=64).check("rho")
    fine = validate_hypotheses(cs, grid_size=128).check("rho")
    assert not coarse.passed and not fine.passed
    assert fine.first_violation <= coarse.first_violation


def test_g_must_be_positive_at_zero():
    """Test the condition on g"""
    cs = CoefficientSet.from_expressions(p=2.0, f="0", g="u-0.5", d="1", rho="u*(1-u)")
    check = validate_hypotheses(cs, grid_size=256).check("g")
    assert not check.passed
    assert check.first_violation == 0.0


def test_d_must_be_positive_inside():
    """Test the condition on d"""
    cs = CoefficientSet.from_expressions(p=2.0, f="0", g="1", d="u-0.5", rho="u*(1-u)")
    assert not validate_hypotheses(cs, grid_size=256).check("d").passed


def test_running_integral_and_grid():
    """Test the Gauss-Legendre running integral on the clustered grid"""
    u = lobatto_grid(64)
    assert u[0] > 0.0 and u[-1] < 1.0
    assert np.all(np.diff(u) > 0)
    np.testing.assert_allclose(running_integral(lambda s: s**2, u), u**3 / 3.0, rtol=1e-12)
    assert math.isclose(running_integral(np.cos, np.array([1.0]))[0], math.sin(1.0), rel_tol=1e-12)
