"""
Finiteness of the propagation time beta (arrival at 0) and the saturation
time alpha (arrival at 1).

Every verdict carries the name of the criterion that produced it and the
integral test it rests on. One-sided criteria return UNKNOWN in the branch
they do not cover.
"""
import logging
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict

from engine.classification.integrals import (
    Convergence,
    IntegralTest,
    diffusion_ratio,
    power_regime_integral,
    reciprocal_reaction,
)
from engine.coefficients.limits import chain_condition, dyadic_points, extrapolate_limit
from engine.coefficients.model import CoefficientSet, EndpointLimits
from engine.errors import DomainError, NoExistence, OscillatingLimit
from engine.wavespeed.estimates import Sign
from shared.config import settings

logger = logging.getLogger(__name__)


class Finiteness(str, Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    UNKNOWN = "unknown"


class CriterionTrace(BaseModel):
    model_config = ConfigDict(frozen=True)

    criterion: str
    test: IntegralTest | None = None
    detail: str = ""


class EndpointVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    finiteness: Finiteness
    trace: CriterionTrace


def _unknown(criterion: str, detail: str) -> EndpointVerdict:
    return EndpointVerdict(finiteness=Finiteness.UNKNOWN, trace=CriterionTrace(criterion=criterion, detail=detail))


def _if_and_only_if(test: IntegralTest, criterion: str) -> EndpointVerdict:
    finiteness = {
        Convergence.CONVERGENT: Finiteness.FINITE,
        Convergence.DIVERGENT: Finiteness.INFINITE,
    }.get(test.outcome, Finiteness.UNKNOWN)
    return EndpointVerdict(finiteness=finiteness, trace=CriterionTrace(criterion=criterion, test=test))


def _implies_finite(test: IntegralTest, criterion: str) -> EndpointVerdict:
    if test.outcome == Convergence.CONVERGENT:
        return EndpointVerdict(finiteness=Finiteness.FINITE, trace=CriterionTrace(criterion=criterion, test=test))
    return EndpointVerdict(
        finiteness=Finiteness.UNKNOWN,
        trace=CriterionTrace(criterion=criterion, test=test, detail="only convergence is conclusive here"),
    )


def beta_finiteness(cs: CoefficientSet, limits: EndpointLimits, at_threshold: bool, sign_0: Sign) -> EndpointVerdict:
    """
    Decide whether the profile reaches 0 in finite time.

    Args:
        cs: Coefficient set
        limits: Endpoint limits
        at_threshold: True for c = c*, False for c > c*
        sign_0: Sign of c* g(0) - f(0) (used at threshold only)

    Returns:
        Verdict with its criterion trace

    Raises:
        NoExistence: If ell0 is infinite
    """
    ell0 = limits.ell0
    if not ell0.known:
        return _unknown("ell0 undecided", "limit of h/u^(1/(p-1)) could not be determined")
    if ell0.is_infinite:
        raise NoExistence("ell0 is infinite: no travelling wave for any speed")

    if ell0.is_finite_positive:
        return _if_and_only_if(reciprocal_reaction(cs, 0), "reciprocal-reaction integral (positive ell0)")

    if not at_threshold:
        if not chain_condition(cs, 0):
            return _unknown("reciprocal-reaction integral above threshold", "chain condition at 0 not established")
        return _if_and_only_if(reciprocal_reaction(cs, 0), "reciprocal-reaction integral above threshold")

    if sign_0 == Sign.POSITIVE:
        return _if_and_only_if(diffusion_ratio(cs, 0), "diffusion-ratio integral at threshold")
    if sign_0 == Sign.ZERO:
        if not chain_condition(cs, 0):
            return _unknown("one-sided reaction test at threshold", "chain condition at 0 not established")
        return _implies_finite(reciprocal_reaction(cs, 0), "one-sided reaction test at threshold")
    return _unknown("diffusion-ratio integral at threshold", "sign of c* g(0) - f(0) undecided")


def _decaying_flux_criterion(cs: CoefficientSet) -> EndpointVerdict:
    """phi = d rho^(p-1) with phi(1-) = 0, phi' -> -inf and divergent int 1/rho gives alpha = -inf."""
    criterion = "decaying-flux barrier at 1"

    def phi(u):
        return cs.d(u) * np.power(cs.rho(u), cs.p - 1.0)

    try:
        at_one = extrapolate_limit(phi, 1)
    except (OscillatingLimit, DomainError) as exc:
        return _unknown(criterion, f"limit of d*rho^(p-1) at 1 undecided: {exc}")
    if not at_one.is_zero:
        return _unknown(criterion, "d*rho^(p-1) does not vanish at 1")

    s, u = dyadic_points(1, list(settings.limit_exponents)[-3:])
    values = np.asarray(phi(u), dtype=float)
    slopes = np.diff(values) / np.diff(u)
    # Difference quotients must keep growing in magnitude like s^(e-1), e < 1
    local = np.log(values[:-1] / values[1:]) / np.log(s[:-1] / s[1:])
    if not (np.all(slopes < 0.0) and np.all(local < 1.0 - settings.exponent_margin)):
        return _unknown(criterion, "derivative of d*rho^(p-1) does not blow up at 1")

    test = reciprocal_reaction(cs, 1)
    if test.outcome == Convergence.DIVERGENT:
        return EndpointVerdict(finiteness=Finiteness.INFINITE, trace=CriterionTrace(criterion=criterion, test=test))
    return EndpointVerdict(
        finiteness=Finiteness.UNKNOWN,
        trace=CriterionTrace(criterion=criterion, test=test, detail="only divergence of int 1/rho is conclusive"),
    )


def alpha_finiteness(cs: CoefficientSet, limits: EndpointLimits, sign_1: Sign) -> EndpointVerdict:
    """
    Decide whether the profile leaves 1 at a finite time.

    Args:
        cs: Coefficient set
        limits: Endpoint limits
        sign_1: Sign of c g(1) - f(1) at the speed being classified

    Returns:
        Verdict with its criterion trace
    """
    ell1 = limits.ell1
    if not ell1.known:
        return _unknown("ell1 undecided", "limit of h/(1-u)^(1/(p-1)) could not be determined")

    if ell1.is_finite_positive:
        return _if_and_only_if(reciprocal_reaction(cs, 1), "reciprocal-reaction integral (positive ell1)")

    if ell1.is_zero:
        if sign_1 == Sign.NEGATIVE:
            return _if_and_only_if(diffusion_ratio(cs, 1), "diffusion-ratio integral (negative drift at 1)")
        if sign_1 == Sign.POSITIVE:
            if not chain_condition(cs, 1):
                return _unknown("reciprocal-reaction integral (positive drift at 1)", "chain condition at 1 not established")
            return _if_and_only_if(reciprocal_reaction(cs, 1), "reciprocal-reaction integral (positive drift at 1)")
        if sign_1 == Sign.ZERO:
            if not chain_condition(cs, 1):
                return _unknown("one-sided reaction test (zero drift at 1)", "chain condition at 1 not established")
            return _implies_finite(reciprocal_reaction(cs, 1), "one-sided reaction test (zero drift at 1)")
        return _unknown("drift at 1 undecided", "sign of c g(1) - f(1) undecided")

    analytic = cs.h_exponent(1)
    if analytic is not None:
        _, lam = analytic
        if -1.0 < lam <= cs.q:
            return _if_and_only_if(power_regime_integral(cs, lam), "power-regime integral (infinite ell1)")
        return _unknown("power-regime integral (infinite ell1)", f"exponent {lam:g} of h at 1 is outside (-1, 1/(p-1)]")
    return _decaying_flux_criterion(cs)
