"""
Closed-form verdicts when d ~ k1 dist^delta and rho ~ k2 dist^r at an endpoint.

These rules depend only on (p, delta, r) and the sign of the drift, so they
serve as an oracle for the general criteria.
"""
import math

from pydantic import BaseModel, ConfigDict

from engine.classification.criteria import Finiteness
from engine.classification.slopes import SlopeKind
from engine.coefficients.model import CoefficientSet, EndpointAsymptotics, PowerLawMeta
from engine.wavespeed.estimates import Sign

TOL = 1e-12


class PowerLawVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    finiteness: Finiteness
    slope: SlopeKind
    rule: str


def _eq(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=TOL, abs_tol=TOL)


def admissible_at_zero(p: float, delta: float, r: float) -> bool:
    """r >= (1-delta)/(p-1), equivalent to a finite ell0."""
    return r > (1.0 - delta) / (p - 1.0) or _eq(r, (1.0 - delta) / (p - 1.0))


def admissible_at_one(p: float, delta: float, r: float) -> bool:
    """r(p-1) + delta + p > 1."""
    return r * (p - 1.0) + delta + p > 1.0 + TOL


def beta_oracle(p: float, delta: float, r: float, at_threshold: bool, sign_0: Sign) -> PowerLawVerdict:
    """Finiteness of beta and the slope at 0 from the power-law exponents at 0."""
    if not admissible_at_zero(p, delta, r):
        raise ValueError("power laws at 0 give an infinite ell0")
    critical = (1.0 - delta) / (p - 1.0)

    if not at_threshold:
        finiteness = Finiteness.FINITE if r < 1.0 else Finiteness.INFINITE
        slope = SlopeKind.ZERO
        return PowerLawVerdict(finiteness=finiteness, slope=slope, rule="reaction exponent below 1 (above threshold)")

    if r < 1.0:
        finiteness, rule = Finiteness.FINITE, "reaction exponent below 1"
    elif _eq(r, critical):
        finiteness, rule = Finiteness.INFINITE, "balanced exponents at least 1"
    elif sign_0 == Sign.POSITIVE:
        finiteness = Finiteness.FINITE if critical < 1.0 else Finiteness.INFINITE
        rule = "diffusion exponent with positive drift"
    else:
        return PowerLawVerdict(finiteness=Finiteness.UNKNOWN, slope=SlopeKind.UNKNOWN, rule="zero drift at threshold")

    if finiteness != Finiteness.FINITE:
        return PowerLawVerdict(finiteness=finiteness, slope=SlopeKind.ZERO, rule=rule)
    if delta < 1.0 and not _eq(delta, 1.0):
        slope = SlopeKind.ZERO
    elif _eq(delta, 1.0):
        slope = {Sign.ZERO: SlopeKind.ZERO, Sign.POSITIVE: SlopeKind.NEGATIVE}.get(sign_0, SlopeKind.UNKNOWN)
    else:
        slope = SlopeKind.MINUS_INFINITY if sign_0 == Sign.POSITIVE else SlopeKind.UNKNOWN
    return PowerLawVerdict(finiteness=finiteness, slope=slope, rule=rule)


def alpha_oracle(p: float, delta: float, r: float, sign_1: Sign) -> PowerLawVerdict:
    """Finiteness of alpha and the slope at 1 from the power-law exponents at 1."""
    if not admissible_at_one(p, delta, r):
        raise ValueError("power laws at 1 violate r(p-1) + delta + p > 1")
    balance = r * (p - 1.0) + delta

    if _eq(balance, 1.0):
        finiteness, rule = (Finiteness.FINITE if p + delta > 2.0 + TOL else Finiteness.INFINITE), "balanced exponents"
    elif balance > 1.0:
        if sign_1 == Sign.NEGATIVE:
            finiteness, rule = (Finiteness.FINITE if p + delta > 2.0 + TOL else Finiteness.INFINITE), "negative drift"
        elif sign_1 == Sign.POSITIVE:
            finiteness, rule = (Finiteness.FINITE if r < 1.0 else Finiteness.INFINITE), "positive drift"
        elif sign_1 == Sign.ZERO and r < 1.0:
            finiteness, rule = Finiteness.FINITE, "zero drift with reaction exponent below 1"
        else:
            finiteness, rule = Finiteness.UNKNOWN, "zero or undecided drift"
    else:
        finiteness, rule = (Finiteness.FINITE if p + delta > r + 1.0 + TOL else Finiteness.INFINITE), "power regime"

    if finiteness == Finiteness.UNKNOWN:
        return PowerLawVerdict(finiteness=finiteness, slope=SlopeKind.UNKNOWN, rule=rule)
    if finiteness == Finiteness.INFINITE:
        return PowerLawVerdict(finiteness=finiteness, slope=SlopeKind.ZERO, rule=rule)
    if delta < 1.0 and not _eq(delta, 1.0):
        slope = SlopeKind.ZERO
    elif _eq(delta, 1.0):
        slope = {
            Sign.POSITIVE: SlopeKind.ZERO,
            Sign.ZERO: SlopeKind.ZERO,
            Sign.NEGATIVE: SlopeKind.NEGATIVE,
        }.get(sign_1, SlopeKind.UNKNOWN)
    else:
        slope = {Sign.POSITIVE: SlopeKind.ZERO, Sign.NEGATIVE: SlopeKind.MINUS_INFINITY}.get(sign_1, SlopeKind.UNKNOWN)
    return PowerLawVerdict(finiteness=finiteness, slope=slope, rule=rule)


def _format(x: float) -> str:
    return f"{x:.12g}"


def power_law_instance(p: float, delta: float, r: float, with_metadata: bool = True) -> CoefficientSet:
    """
    f = 0, g = 1, d = (u(1-u))^delta, rho = (u(1-u))^r: the same exponents at both endpoints.
    """
    d = f"u^{_format(delta)}*(1-u)^{_format(delta)}"
    rho = f"u^{_format(r)}*(1-u)^{_format(r)}"
    meta_0 = meta_1 = None
    if with_metadata:
        meta_0 = EndpointAsymptotics(
            d=PowerLawMeta(constant=1.0, exponent=delta, endpoint=0),
            rho=PowerLawMeta(constant=1.0, exponent=r, endpoint=0),
        )
        meta_1 = EndpointAsymptotics(
            d=PowerLawMeta(constant=1.0, exponent=delta, endpoint=1),
            rho=PowerLawMeta(constant=1.0, exponent=r, endpoint=1),
        )
    return CoefficientSet.from_expressions(p=p, f="0", g="1", d=d, rho=rho, endpoint_meta_0=meta_0, endpoint_meta_1=meta_1)
