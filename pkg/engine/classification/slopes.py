"""
Limits of u' where the profile reaches 0 and 1.

u' = -(z(u)/d(u))^(1/(p-1)), so the slopes follow from the behaviour of z
and d at the endpoints.
"""
import math
from enum import Enum

from pydantic import BaseModel, ConfigDict

from engine.coefficients.model import CoefficientSet, EndpointLimits, LimitValue
from engine.wavespeed.estimates import Sign


class SlopeKind(str, Enum):
    ZERO = "zero"
    NEGATIVE = "negative"
    MINUS_INFINITY = "minus-infinity"
    UNKNOWN = "unknown"


class SlopeVerdict(BaseModel):
    """Endpoint slope; value is None when only its kind is known."""

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    kind: SlopeKind
    value: float | None = None
    criterion: str = ""

    @property
    def negative(self) -> bool:
        return self.kind in (SlopeKind.NEGATIVE, SlopeKind.MINUS_INFINITY)


def _zero(criterion: str) -> SlopeVerdict:
    return SlopeVerdict(kind=SlopeKind.ZERO, value=0.0, criterion=criterion)


def _unknown(criterion: str) -> SlopeVerdict:
    return SlopeVerdict(kind=SlopeKind.UNKNOWN, criterion=criterion)


def _minus_infinity(criterion: str) -> SlopeVerdict:
    return SlopeVerdict(kind=SlopeKind.MINUS_INFINITY, value=-math.inf, criterion=criterion)


def _bounded_below(limit: LimitValue) -> bool:
    return limit.known and limit.value > 0.0


def _finite_slope(magnitude: float | None, q: float, criterion: str) -> SlopeVerdict:
    if magnitude is None:
        return SlopeVerdict(kind=SlopeKind.NEGATIVE, criterion=criterion)
    if magnitude <= 0.0:
        return _zero(criterion)
    return SlopeVerdict(kind=SlopeKind.NEGATIVE, value=-(magnitude**q), criterion=criterion)


def slope_at_zero(
    cs: CoefficientSet,
    limits: EndpointLimits,
    at_threshold: bool,
    sign_0: Sign,
    drift_at_0: float | None = None,
) -> SlopeVerdict:
    """
    lim u'(t) as t -> beta.

    Args:
        cs: Coefficient set
        limits: Endpoint limits
        at_threshold: True for c = c*
        sign_0: Sign of c g(0) - f(0) at the classified speed
        drift_at_0: Value of c* g(0) - f(0), when known
    """
    if _bounded_below(limits.d_at_0):
        return _zero("diffusion bounded away from 0")
    if not limits.d_at_0.is_zero:
        return _unknown("diffusion limit at 0 undecided")

    ddot = limits.ddot_0
    if ddot.is_infinite:
        return _zero("diffusion vanishes slower than linearly at 0")
    if ddot.is_finite_positive:
        criterion = "linear diffusion at 0"
        if not at_threshold or sign_0 == Sign.ZERO:
            return _zero(criterion)
        if sign_0 != Sign.POSITIVE:
            return _unknown(criterion)
        magnitude = None if drift_at_0 is None else drift_at_0 / ddot.value
        return _finite_slope(magnitude, cs.q, criterion)
    if ddot.is_zero:
        criterion = "diffusion vanishes faster than linearly at 0"
        if not at_threshold:
            return _zero(criterion)
        if sign_0 == Sign.POSITIVE:
            return _minus_infinity(criterion)
        return _unknown(criterion)
    return _unknown("derivative of d at 0 undecided")


def slope_at_one(
    cs: CoefficientSet,
    limits: EndpointLimits,
    sign_1: Sign,
    drift_at_1: float | None = None,
) -> SlopeVerdict:
    """
    lim u'(t) as t -> alpha.

    Args:
        cs: Coefficient set
        limits: Endpoint limits
        sign_1: Sign of c g(1) - f(1)
        drift_at_1: Value of c g(1) - f(1), when known
    """
    if _bounded_below(limits.d_at_1):
        return _zero("diffusion bounded away from 0 at 1")
    if not limits.d_at_1.is_zero:
        return _unknown("diffusion limit at 1 undecided")

    ddot = limits.ddot_1
    ell1 = limits.ell1
    if ddot.is_infinite:
        if ell1.known and not ell1.is_infinite:
            return _zero("diffusion vanishes slower than linearly at 1")
        analytic = cs.h_exponent(1)
        if ell1.is_infinite and analytic is not None and -1.0 < analytic[1] <= cs.q:
            return _zero("power regime at 1")
        return _unknown("diffusion vanishes slower than linearly at 1")
    if ddot.known and ddot.value < 0.0:
        criterion = "linear diffusion at 1"
        if sign_1 in (Sign.POSITIVE, Sign.ZERO):
            return _zero(criterion)
        if sign_1 != Sign.NEGATIVE:
            return _unknown(criterion)
        magnitude = None if drift_at_1 is None else max(0.0, drift_at_1 / ddot.value)
        return _finite_slope(magnitude, cs.q, criterion)
    if ddot.is_zero:
        criterion = "diffusion vanishes faster than linearly at 1"
        if sign_1 == Sign.POSITIVE:
            return _zero(criterion)
        if sign_1 == Sign.NEGATIVE:
            return _minus_infinity(criterion)
        return _unknown(criterion)
    return _unknown("derivative of d at 1 undecided")
