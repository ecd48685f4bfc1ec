"""
Analytic bracket for the minimal speed.

    lower = f(0)/g(0) + p'(p-1)^(1/p) ell0^(1/p') / g(0)
    upper = F0/G0 + p'(p-1)^(1/p) L0^(1/p') / G0

with G0 = inf of the running mean of g, F0 = sup of the running mean of f and
L0 = sup of the running mean of (d/s)^(1/(p-1)) rho. Running means are taken
on a clustered grid together with their limits at u -> 0.
"""
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict

from engine.coefficients.limits import endpoint_limits
from engine.coefficients.model import CoefficientSet, EndpointLimits
from engine.coefficients.validation import lobatto_grid, running_integral
from engine.errors import DegenerateDenominator, NoExistence
from shared.config import settings

logger = logging.getLogger(__name__)

DENOMINATOR_FLOOR = 1e-8


class SpeedBounds(BaseModel):
    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float
    G0: float
    F0: float
    L0: float


def running_means(cs: CoefficientSet, ell0: float, grid_size: int | None = None) -> tuple[float, float, float]:
    """(G0, F0, L0) from running means on the grid plus their values at u -> 0."""
    u = lobatto_grid(grid_size or settings.bounds_grid)

    def ell_integrand(s):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.power(cs.d(s) / s, cs.q) * cs.rho(s)

    mean_g = running_integral(cs.g, u) / u
    mean_f = running_integral(cs.f, u) / u
    mean_ell = running_integral(ell_integrand, u) / u
    G0 = float(min(np.min(mean_g), float(cs.g(0.0))))
    F0 = float(max(np.max(mean_f), float(cs.f(0.0))))
    L0 = float(max(np.max(mean_ell), ell0))
    return G0, F0, L0


def speed_bounds(cs: CoefficientSet, limits: EndpointLimits | None = None, grid_size: int | None = None) -> SpeedBounds:
    """
    Compute the bracket lower <= c* <= upper.

    Raises:
        NoExistence: If ell0 is infinite (no wave for any speed)
        DegenerateDenominator: If g(0) or G0 is below the numerical floor
    """
    limits = limits or endpoint_limits(cs)
    if limits.ell0.is_infinite:
        raise NoExistence("h/u^(1/(p-1)) is unbounded at 0: no travelling wave for any speed")
    g0, f0 = float(cs.g(0.0)), float(cs.f(0.0))
    if g0 < DENOMINATOR_FLOOR:
        raise DegenerateDenominator(f"g(0) = {g0:g} is numerically zero")
    G0, F0, L0 = running_means(cs, limits.ell0.value, grid_size)
    if G0 < DENOMINATOR_FLOOR:
        raise DegenerateDenominator(f"inf of the running mean of g is {G0:g}")

    factor = cs.threshold_constant
    exponent = 1.0 / cs.p_conjugate
    lower = f0 / g0 + factor * limits.ell0.value**exponent / g0
    upper = F0 / G0 + factor * L0**exponent / G0
    if math.isinf(upper):
        logger.warning("Upper speed bound is infinite; shooting will expand from the lower bound")
    bounds = SpeedBounds(lower=lower, upper=max(upper, lower), G0=G0, F0=F0, L0=L0)
    logger.info("Speed bracket [%.6g, %.6g]", bounds.lower, bounds.upper)
    return bounds


def necessary_condition(cs: CoefficientSet, c: float) -> bool:
    """
    Integral identity every wave satisfies: c * int_0^1 g > int_0^1 f.

    A speed failing it cannot carry a travelling wave.
    """
    one = np.array([1.0])
    return bool(c * running_integral(cs.g, one)[0] > running_integral(cs.f, one)[0])
