"""
Sign tests comparing c* with a trial speed k, and the signs of c* g - f at
the endpoints derived from them.
"""
import logging
from enum import Enum

import numpy as np

from engine.coefficients.limits import dyadic_points, endpoint_limits
from engine.coefficients.model import CoefficientSet, EndpointLimits
from engine.coefficients.validation import lobatto_grid, running_integral
from engine.wavespeed.shooting import WaveSpeedEstimate
from shared.config import settings

logger = logging.getLogger(__name__)

# Dyadic levels sampled for "in a right neighbourhood of 0"
NEAR_ZERO_LEVELS = range(8, 31)
SLACK = 1e-12


class StimaVerdict(str, Enum):
    PROVES_GREATER = "proves-greater"
    PROVES_LESS_EQ = "proves-less-eq"
    INCONCLUSIVE = "inconclusive"


class Sign(str, Enum):
    POSITIVE = "positive"
    ZERO = "zero"
    NEGATIVE = "negative"
    UNKNOWN = "unknown"


def critical_constant(p: float) -> float:
    """p^p / (p-1)^(p-1)."""
    return p**p / (p - 1.0) ** (p - 1.0)


def _excess(cs: CoefficientSet, k: float, u: np.ndarray) -> np.ndarray:
    return k * cs.g(u) - cs.f(u)


def _energy_ratio(cs: CoefficientSet, k: float, u: np.ndarray) -> np.ndarray:
    """(kg - f)^(p-1) int_0^u (kg - f) divided by d rho^(p-1)."""
    excess = np.maximum(_excess(cs, k, u), 0.0)
    integral = running_integral(lambda s: _excess(cs, k, s), u)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.power(excess, cs.p - 1.0) * integral / (cs.d(u) * np.power(cs.rho(u), cs.p - 1.0))


def stima_test(cs: CoefficientSet, k: float, grid_size: int | None = None) -> StimaVerdict:
    """
    Decide c* > k or c* <= k from the coefficients alone, when possible.

    Checks, in order:
        f >= k g near 0                                      -> c* > k
        k g >= f near 0 and the energy ratio stays below
            some l < p^p/(p-1)^(p-1) near 0                  -> c* > k
        k g >= f on (0,1) and the energy ratio is at least
            p^p/(p-1)^(p-1) on (0,1)                         -> c* <= k

    Args:
        cs: Coefficient set
        k: Trial speed
        grid_size: Points of the interior grid for the global check

    Returns:
        The verdict, INCONCLUSIVE when no check applies
    """
    _, near = dyadic_points(0, NEAR_ZERO_LEVELS)
    excess_near = _excess(cs, k, near)
    if np.all(excess_near <= SLACK * np.maximum(1.0, np.abs(k * cs.g(near)))):
        return StimaVerdict.PROVES_GREATER

    bound = critical_constant(cs.p)
    if np.all(excess_near >= 0.0):
        ratio_near = _energy_ratio(cs, k, near)
        if np.all(np.isfinite(ratio_near)) and np.max(ratio_near) < bound * (1.0 - settings.exponent_margin):
            return StimaVerdict.PROVES_GREATER

    u = lobatto_grid(grid_size or settings.hypothesis_grid)
    if np.all(_excess(cs, k, u) >= 0.0):
        ratio = _energy_ratio(cs, k, u)
        if np.all(ratio >= bound * (1.0 - SLACK)):
            return StimaVerdict.PROVES_LESS_EQ
    return StimaVerdict.INCONCLUSIVE


def lower_solution_from_stima(cs: CoefficientSet, k: float):
    """
    Phi(u) = (1/p) int_0^u (k g - f), a lower-solution of the reduced
    equation at any c >= k when the global energy inequality holds.
    """

    def phi(u):
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return running_integral(lambda s: _excess(cs, k, s), u) / cs.p

    return phi


def _sign_from(value_low: float, value_high: float, tol: float) -> Sign:
    if value_low > tol:
        return Sign.POSITIVE
    if value_high < -tol:
        return Sign.NEGATIVE
    return Sign.UNKNOWN


def sign_at_zero(cs: CoefficientSet, estimate: WaveSpeedEstimate, limits: EndpointLimits | None = None) -> Sign:
    """
    Sign of c* g(0) - f(0).

    Positive whenever ell0 > 0; otherwise the sign test at k = f(0)/g(0)
    decides, and the numeric bracket is the fallback.
    """
    limits = limits or endpoint_limits(cs, strict=False)
    g0, f0 = float(cs.g(0.0)), float(cs.f(0.0))
    if limits.ell0.is_finite_positive:
        return Sign.POSITIVE
    k = f0 / g0
    verdict = stima_test(cs, k)
    if verdict == StimaVerdict.PROVES_GREATER:
        return Sign.POSITIVE
    if verdict == StimaVerdict.PROVES_LESS_EQ:
        # c* >= f(0)/g(0) always, so c* = k
        return Sign.ZERO
    sign = _sign_from(estimate.lower * g0 - f0, estimate.upper * g0 - f0, 10.0 * settings.default_tol * g0)
    logger.debug("Sign at 0 from the numeric bracket: %s", sign.value)
    return sign


def sign_at_one(cs: CoefficientSet, estimate: WaveSpeedEstimate) -> Sign:
    """
    Sign of c* g(1) - f(1), from the numeric bracket first and the sign test
    at k = f(1)/g(1) otherwise.
    """
    g1, f1 = float(cs.g(1.0)), float(cs.f(1.0))
    tol = 10.0 * settings.default_tol * abs(g1)
    sign = _sign_from(estimate.lower * g1 - f1, estimate.upper * g1 - f1, tol)
    if sign != Sign.UNKNOWN or g1 <= 0.0:
        return sign
    k = f1 / g1
    verdict = stima_test(cs, k)
    if verdict == StimaVerdict.PROVES_GREATER:
        return Sign.POSITIVE
    if verdict == StimaVerdict.PROVES_LESS_EQ and estimate.analytic.lower >= k - tol / max(g1, 1e-300):
        return Sign.ZERO
    return Sign.UNKNOWN
