"""
Endpoint limits and local power fits on dyadic grids u = 2^-j (or 1 - 2^-j).
"""
import logging
import math
from collections.abc import Callable, Iterable
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict

from engine.coefficients.model import (
    CoefficientSet,
    Endpoint,
    EndpointLimits,
    LimitConfidence,
    LimitValue,
)
from engine.errors import DomainError, FitFailed, OscillatingLimit
from shared.config import settings

logger = logging.getLogger(__name__)

# Successive local exponents must agree this well before a limit is trusted
EXPONENT_DRIFT = 0.05
EXACT_RESIDUAL = 1e-12


class Convergence(str, Enum):
    CONVERGENT = "convergent"
    DIVERGENT = "divergent"
    UNDECIDED = "undecided"


def exponent_rule(exponent: float, exact: bool, margin: float | None = None) -> Convergence:
    """Convergence of int dist^exponent at 0; inexact exponents near -1 stay undecided."""
    margin = settings.exponent_margin if margin is None else margin
    if exact:
        return Convergence.CONVERGENT if exponent > -1.0 else Convergence.DIVERGENT
    if exponent > -1.0 + margin:
        return Convergence.CONVERGENT
    if exponent < -1.0 - margin:
        return Convergence.DIVERGENT
    return Convergence.UNDECIDED


class PowerFit(BaseModel):
    """fn(dist) ~ constant * dist^exponent, fitted by least squares in log-log scale."""

    model_config = ConfigDict(frozen=True)

    constant: float
    exponent: float
    residual: float

    @property
    def exact(self) -> bool:
        """True when the samples lie on a straight line to rounding error."""
        return self.residual <= EXACT_RESIDUAL


def dyadic_points(endpoint: Endpoint, levels: Iterable[int]) -> tuple[np.ndarray, np.ndarray]:
    """Distances s = 2^-j and the matching points u near the endpoint."""
    s = np.power(2.0, -np.asarray(list(levels), dtype=float))
    return s, (s if endpoint == 0 else 1.0 - s)


def power_fit(fn: Callable, endpoint: Endpoint, levels: Iterable[int] | None = None) -> PowerFit:
    """
    Fit fn ~ C * dist^e near an endpoint.

    Args:
        fn: Vectorized positive function of u
        endpoint: 0 or 1
        levels: Dyadic exponents j of the sample grid (default from settings)

    Returns:
        Fitted constant, exponent and RMS residual of the log-log fit

    Raises:
        FitFailed: If fn is non-positive or non-finite on the grid
    """
    s, u = dyadic_points(endpoint, levels if levels is not None else settings.fit_exponents)
    try:
        values = np.asarray(fn(u), dtype=float)
    except DomainError as exc:
        raise FitFailed(f"cannot sample near u={endpoint}: {exc}") from exc
    if np.any(~np.isfinite(values)) or np.any(values <= 0):
        raise FitFailed(f"non-positive or non-finite samples near u={endpoint}")
    log_s, log_v = np.log(s), np.log(values)
    slope, intercept = np.polyfit(log_s, log_v, 1)
    residual = float(np.sqrt(np.mean((log_v - (slope * log_s + intercept)) ** 2)))
    exponent = float(slope)
    if residual <= EXACT_RESIDUAL:
        exponent = round(exponent, 9)
    return PowerFit(constant=float(math.exp(intercept)), exponent=exponent, residual=residual)


def extrapolate_limit(
    fn: Callable,
    endpoint: Endpoint,
    levels: Iterable[int] | None = None,
    rtol: float | None = None,
    margin: float | None = None,
) -> LimitValue:
    """
    Limit of a non-negative function at an endpoint from dyadic samples.

    The local exponent log2(v_j / v_{j+1}) decides between 0, a finite value
    and +inf; finite values are Richardson-extrapolated.

    Raises:
        OscillatingLimit: If the local exponents or the extrapolants do not settle
    """
    rtol = settings.limit_rtol if rtol is None else rtol
    margin = settings.exponent_margin if margin is None else margin
    _, u = dyadic_points(endpoint, levels if levels is not None else settings.limit_exponents)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        values = np.asarray(fn(u), dtype=float)
    if np.any(np.isnan(values)) or np.any(values < 0):
        raise OscillatingLimit(f"samples near u={endpoint} are undefined or negative")
    if np.all(values[-3:] == 0.0):
        return LimitValue(value=0.0, confidence=LimitConfidence.EXTRAPOLATED)
    if np.all(np.isposinf(values[-3:])):
        return LimitValue(value=math.inf, confidence=LimitConfidence.EXTRAPOLATED)
    if np.any(~np.isfinite(values)) or np.any(values == 0):
        raise OscillatingLimit(f"samples near u={endpoint} mix zero, finite and infinite values")

    local = np.log2(values[:-1] / values[1:])
    if abs(local[-1] - local[-2]) > EXPONENT_DRIFT:
        raise OscillatingLimit(f"local exponent near u={endpoint} drifts: {local[-2]:.4g} -> {local[-1]:.4g}")
    if local[-1] > margin:
        return LimitValue(value=0.0, confidence=LimitConfidence.EXTRAPOLATED)
    if local[-1] < -margin:
        return LimitValue(value=math.inf, confidence=LimitConfidence.EXTRAPOLATED)

    extrapolants = 2.0 * values[1:] - values[:-1]
    if abs(extrapolants[-1] - extrapolants[-2]) <= rtol * abs(extrapolants[-1]):
        return LimitValue(value=float(extrapolants[-1]), confidence=LimitConfidence.EXTRAPOLATED)
    if abs(values[-1] - values[-2]) <= rtol * abs(values[-1]):
        return LimitValue(value=float(values[-1]), confidence=LimitConfidence.EXTRAPOLATED)
    raise OscillatingLimit(f"extrapolants near u={endpoint} do not agree to {rtol:g}")


def _power_limit(constant: float, exponent: float) -> LimitValue:
    """lim constant * dist^exponent as dist -> 0."""
    if exponent > 1e-12:
        value = 0.0
    elif exponent < -1e-12:
        value = math.inf
    else:
        value = constant
    return LimitValue(value=value, confidence=LimitConfidence.ANALYTIC)


def _soft(fn: Callable, endpoint: Endpoint) -> LimitValue:
    try:
        return extrapolate_limit(fn, endpoint)
    except (OscillatingLimit, DomainError) as exc:
        logger.info("Limit left undecided: %s", exc)
        return LimitValue()


def _ell(cs: CoefficientSet, endpoint: Endpoint, strict: bool) -> LimitValue:
    analytic = cs.h_exponent(endpoint)
    if analytic is not None:
        constant, exponent = analytic
        return _power_limit(constant, exponent - cs.q)

    def ratio(u):
        dist = u if endpoint == 0 else 1.0 - u
        return cs.rho(u) * np.power(cs.d(u) / dist, cs.q)

    if strict:
        return extrapolate_limit(ratio, endpoint)
    return _soft(ratio, endpoint)


def _negated(limit: LimitValue) -> LimitValue:
    if not limit.known:
        return limit
    return LimitValue(value=-limit.value if limit.value != 0 else 0.0, confidence=limit.confidence)


def endpoint_limits(cs: CoefficientSet, strict: bool = True) -> EndpointLimits:
    """
    Compute ell0, ell1, d(0+), d(1-), lim d/u and lim -d/(1-u).

    Power-law descriptors give analytic values; otherwise limits are
    extrapolated numerically. The controlling limits ell0/ell1 raise
    OscillatingLimit in strict mode; the d limits are flagged unknown.

    Args:
        cs: Coefficient set
        strict: Raise instead of flagging when ell0 or ell1 cannot be decided

    Returns:
        EndpointLimits with a confidence flag on each value
    """
    meta0, meta1 = cs.endpoint_meta_0, cs.endpoint_meta_1

    if meta0.d is not None:
        d_at_0 = _power_limit(meta0.d.constant, meta0.d.exponent)
        ddot_0 = _power_limit(meta0.d.constant, meta0.d.exponent - 1.0)
    else:
        d_at_0 = _soft(cs.d, 0)
        ddot_0 = _soft(lambda u: cs.d(u) / u, 0)

    if meta1.d is not None:
        d_at_1 = _power_limit(meta1.d.constant, meta1.d.exponent)
        ddot_1 = _negated(_power_limit(meta1.d.constant, meta1.d.exponent - 1.0))
    else:
        d_at_1 = _soft(cs.d, 1)
        ddot_1 = _negated(_soft(lambda u: cs.d(u) / (1.0 - u), 1))

    limits = EndpointLimits(
        ell0=_ell(cs, 0, strict),
        ell1=_ell(cs, 1, strict),
        d_at_0=d_at_0,
        d_at_1=d_at_1,
        ddot_0=ddot_0,
        ddot_1=ddot_1,
    )
    logger.debug("Endpoint limits: %s", limits.model_dump())
    return limits


def chain_condition(cs: CoefficientSet, endpoint: Endpoint, fit_tolerance: float = 1e-3) -> bool:
    """
    Whether d*rho^(p-1) may be assumed to satisfy the chain condition at an endpoint.

    An explicit flag wins; complete power-law descriptors imply the condition;
    otherwise a power fit of d*rho^(p-1) with small residual is accepted.
    """
    meta = cs.meta(endpoint)
    if meta.chain_condition is not None:
        return meta.chain_condition
    if meta.complete:
        return True
    try:
        fit = power_fit(lambda u: cs.d(u) * np.power(cs.rho(u), cs.p - 1.0), endpoint)
    except FitFailed:
        return False
    return fit.residual <= fit_tolerance
