"""
Arrival times from the reduced solution:

    beta  =  int_0^1/2 (d/z)^(1/(p-1)) du
    alpha = -int_1/2^1 (d/z)^(1/(p-1)) du

The sampled range is integrated with Simpson's rule in a logarithmic
variable; the pieces beyond the sampled range are integrated in closed form
from the local power model of the integrand, whose exponent alone decides
convergence.
"""
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import integrate

from engine.coefficients.limits import Convergence, endpoint_limits, exponent_rule, power_fit
from engine.coefficients.model import CoefficientSet, Endpoint, EndpointLimits
from engine.errors import FitFailed, UndecidableTail
from engine.reduced.eta import eta0_roots
from engine.reduced.solution import ReducedSolution

logger = logging.getLogger(__name__)

POINTS_PER_DECADE = 200
SPLIT = 0.5


class TailExponent(BaseModel):
    """Integrand (d/z)^(1/(p-1)) ~ C dist^exponent beyond the sampled range."""

    model_config = ConfigDict(frozen=True)

    exponent: float
    exact: bool

    @property
    def convergent(self) -> bool:
        outcome = exponent_rule(self.exponent, self.exact)
        if outcome == Convergence.UNDECIDED:
            raise UndecidableTail(f"tail exponent {self.exponent:.6g} is within the margin of -1")
        return outcome == Convergence.CONVERGENT


def _exponent_of(cs: CoefficientSet, name: str, endpoint: Endpoint) -> tuple[float, bool]:
    """Power exponent of d or rho at an endpoint, analytic when described."""
    meta = getattr(cs.meta(endpoint), name)
    if meta is not None:
        return meta.exponent, True
    fn = cs.d if name == "d" else cs.rho
    try:
        fit = power_fit(fn, endpoint)
    except FitFailed as exc:
        raise UndecidableTail(f"no power model for {name} near u={endpoint}: {exc}") from exc
    return fit.exponent, fit.exact


def integrand(sol: ReducedSolution, cs: CoefficientSet, u) -> np.ndarray:
    """(d(u)/z(u))^(1/(p-1))."""
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.power(cs.d(u) / sol.z_at(u), cs.q)


def tail_exponent_at_zero(sol: ReducedSolution, cs: CoefficientSet, limits: EndpointLimits | None = None) -> TailExponent:
    """
    Exponent of the integrand as u -> 0.

    A positive slope z'(0) gives (d/u)^(1/(p-1)); a zero slope gives
    (c g(0) - f(0))/rho, the balance of the reduced equation at 0.
    """
    limits = limits or endpoint_limits(cs, strict=False)
    if not limits.ell0.known or limits.ell0.is_infinite:
        raise UndecidableTail("ell0 is not a finite known limit")
    a = sol.c * float(cs.g(0.0)) - float(cs.f(0.0))
    roots = eta0_roots(sol.c, float(cs.g(0.0)), float(cs.f(0.0)), limits.ell0.value, cs.p)
    if not roots.exist or sol.terminal_ratio is None:
        raise UndecidableTail("no slope at 0 to build the tail model from")
    slope = min((roots.r0_minus, roots.r0_plus), key=lambda r: abs(r - sol.terminal_ratio))
    if slope > 1e-9 * max(1.0, roots.r0_plus):
        delta, exact = _exponent_of(cs, "d", 0)
        return TailExponent(exponent=cs.q * (delta - 1.0), exact=exact)
    if a <= 0.0:
        raise UndecidableTail("slope and drift both vanish at 0")
    r, exact = _exponent_of(cs, "rho", 0)
    return TailExponent(exponent=-r, exact=exact)


def tail_exponent_at_one(sol: ReducedSolution, cs: CoefficientSet) -> TailExponent:
    """
    Exponent of the integrand as u -> 1, from the startup model z ~ K (1-u)^sigma
    or, after a zero-slope start, from the balance (c g(1) - f(1))/rho.
    """
    if sol.tail_at_one is not None:
        delta, exact = _exponent_of(cs, "d", 1)
        return TailExponent(exponent=cs.q * (delta - sol.tail_at_one.exponent), exact=exact)
    b = sol.c * float(cs.g(1.0)) - float(cs.f(1.0))
    if b <= 0.0:
        raise UndecidableTail("slope and drift both vanish at 1")
    r, exact = _exponent_of(cs, "rho", 1)
    return TailExponent(exponent=-r, exact=exact)


def _log_simpson(values_at, x_low: float, x_high: float, jacobian) -> float:
    n = max(65, int(POINTS_PER_DECADE * (x_high - x_low) / math.log(10.0)) | 1)
    x = np.linspace(x_low, x_high, n)
    return float(integrate.simpson(values_at(x) * jacobian(x), x=x))


def time_to_zero(sol: ReducedSolution, cs: CoefficientSet, limits: EndpointLimits | None = None) -> float:
    """
    beta as the integral of (d/z)^(1/(p-1)) over (0, 1/2].

    Returns:
        beta, or +inf when the tail exponent is at most -1

    Raises:
        UndecidableTail: If the tail exponent is within the margin of -1
    """
    tail = tail_exponent_at_zero(sol, cs, limits)
    if not tail.convergent:
        return math.inf
    u_floor = sol.u_floor
    body = _log_simpson(lambda x: integrand(sol, cs, np.exp(x)), math.log(u_floor), math.log(SPLIT), np.exp)
    edge = float(integrand(sol, cs, np.array([u_floor]))[0])
    return body + edge * u_floor / (tail.exponent + 1.0)


def time_to_one(sol: ReducedSolution, cs: CoefficientSet) -> float:
    """
    alpha as minus the integral of (d/z)^(1/(p-1)) over [1/2, 1).

    Returns:
        alpha, or -inf when the tail exponent is at most -1

    Raises:
        UndecidableTail: If the tail exponent is within the margin of -1
    """
    tail = tail_exponent_at_one(sol, cs)
    if not tail.convergent:
        return -math.inf
    s_start = 1.0 - sol.u_start
    body = _log_simpson(lambda x: integrand(sol, cs, 1.0 - np.exp(x)), math.log(s_start), math.log(1.0 - SPLIT), np.exp)
    edge = float(integrand(sol, cs, np.array([sol.u_start]))[0])
    return -(body + edge * s_start / (tail.exponent + 1.0))


def tail_constant(sol: ReducedSolution, cs: CoefficientSet, u_edge: float, dist: float, exponent: float) -> float:
    """C in (d/z)^(1/(p-1)) ~ C dist^exponent, matched at the edge of the sampled range."""
    return float(integrand(sol, cs, np.array([u_edge]))[0]) / dist**exponent


