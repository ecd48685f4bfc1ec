"""
Convergence of improper integrals at an endpoint, decided by the exponent
of the integrand: int_0 dist^e converges iff e > -1.
"""
import logging
from collections.abc import Callable
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict

from engine.coefficients.limits import Convergence, dyadic_points, exponent_rule, power_fit
from engine.coefficients.model import CoefficientSet, Endpoint
from engine.errors import DomainError, FitFailed
from shared.config import settings

logger = logging.getLogger(__name__)

# Fits this poor do not describe a power law
MAX_FIT_RESIDUAL = 1e-2
# Local exponents this close to -1 are read as exactly -1 (logarithmic divergence)
UNIT_EXPONENT_TOL = 1e-6


class IntegralTest(BaseModel):
    """Outcome of one convergence test, with the exponent it was based on."""

    model_config = ConfigDict(frozen=True)

    integrand: str
    endpoint: Endpoint
    exponent: float | None = None
    source: Literal["analytic", "fitted", "none"] = "none"
    outcome: Convergence = Convergence.UNDECIDED


def _finest_local_exponent(fn: Callable, endpoint: Endpoint) -> float | None:
    levels = list(settings.limit_exponents)[-2:]
    s, u = dyadic_points(endpoint, levels)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.asarray(fn(u), dtype=float)
    if np.any(~np.isfinite(values)) or np.any(values <= 0):
        return None
    return float(np.log(values[1] / values[0]) / np.log(s[1] / s[0]))


def integral_converges(
    fn: Callable,
    endpoint: Endpoint,
    integrand: str,
    exponent: float | None = None,
) -> IntegralTest:
    """
    Decide whether int fn converges at an endpoint.

    Args:
        fn: Vectorized positive integrand
        endpoint: 0 or 1
        integrand: Human-readable name for reports
        exponent: Known exponent of fn ~ C dist^e (skips the fit)

    Returns:
        IntegralTest with the exponent used and the verdict
    """
    if exponent is not None:
        return IntegralTest(
            integrand=integrand, endpoint=endpoint, exponent=exponent,
            source="analytic", outcome=exponent_rule(exponent, exact=True),
        )
    try:
        fit = power_fit(fn, endpoint)
    except (FitFailed, DomainError) as exc:
        logger.info("No power fit for %s near u=%d: %s", integrand, endpoint, exc)
        return IntegralTest(integrand=integrand, endpoint=endpoint)
    if fit.exact:
        outcome = exponent_rule(fit.exponent, exact=True)
        return IntegralTest(integrand=integrand, endpoint=endpoint, exponent=fit.exponent, source="fitted", outcome=outcome)
    if fit.residual > MAX_FIT_RESIDUAL:
        return IntegralTest(integrand=integrand, endpoint=endpoint, exponent=fit.exponent, source="fitted")

    local = _finest_local_exponent(fn, endpoint)
    value = fit.exponent if local is None else local
    if abs(value + 1.0) <= UNIT_EXPONENT_TOL:
        outcome = Convergence.DIVERGENT
    else:
        outcome = exponent_rule(value, exact=False)
    return IntegralTest(integrand=integrand, endpoint=endpoint, exponent=value, source="fitted", outcome=outcome)


def _distance(u, endpoint: Endpoint):
    return u if endpoint == 0 else 1.0 - u


def reciprocal_reaction(cs: CoefficientSet, endpoint: Endpoint) -> IntegralTest:
    """int 1/rho at the endpoint."""
    meta = cs.meta(endpoint).rho
    exponent = None if meta is None else -meta.exponent
    return integral_converges(lambda u: 1.0 / cs.rho(u), endpoint, "1/rho", exponent)


def diffusion_ratio(cs: CoefficientSet, endpoint: Endpoint) -> IntegralTest:
    """int (d/dist)^(1/(p-1)) at the endpoint."""
    meta = cs.meta(endpoint).d
    exponent = None if meta is None else cs.q * (meta.exponent - 1.0)

    def integrand(u):
        return np.power(cs.d(u) / _distance(u, endpoint), cs.q)

    return integral_converges(integrand, endpoint, "(d/dist)^(1/(p-1))", exponent)


def power_regime_integral(cs: CoefficientSet, lam: float) -> IntegralTest:
    """int (1-u)^(lambda - (lambda+1)/p) / rho near 1, for h ~ c (1-u)^lambda."""
    shift = lam - (lam + 1.0) / cs.p
    meta = cs.endpoint_meta_1.rho
    exponent = None if meta is None else shift - meta.exponent

    def integrand(u):
        return np.power(1.0 - u, shift) / cs.rho(u)

    return integral_converges(integrand, 1, "(1-u)^(lambda-(lambda+1)/p)/rho", exponent)
