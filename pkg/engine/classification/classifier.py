"""
Wave classification: endpoint times, endpoint slopes and the wave type,
with analytic verdicts cross-checked against quadrature when a reduced
solution is available.
"""
import logging
import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from engine.classification.criteria import (
    CriterionTrace,
    EndpointVerdict,
    Finiteness,
    alpha_finiteness,
    beta_finiteness,
)
from engine.classification.slopes import SlopeKind, SlopeVerdict, slope_at_one, slope_at_zero
from engine.coefficients.limits import endpoint_limits
from engine.coefficients.model import CoefficientSet, EndpointLimits
from engine.errors import InadmissibleSpeed, UndecidableTail
from engine.profile.quadrature import time_to_one, time_to_zero
from engine.reduced.solution import ReducedSolution
from engine.wavespeed.estimates import Sign, sign_at_one, sign_at_zero
from engine.wavespeed.shooting import WaveSpeedEstimate, is_threshold, threshold_slack

logger = logging.getLogger(__name__)


class WaveType(str, Enum):
    CLASSICAL = "classical"
    SHARP_I = "sharp-I"
    SHARP_II = "sharp-II"
    SHARP_III = "sharp-III"
    UNKNOWN = "unknown"


class Provenance(str, Enum):
    ANALYTIC = "analytic-criterion"
    NUMERIC = "numeric-quadrature"
    BOTH = "both-agree"
    CONFLICT = "conflict"


class WaveClassification(BaseModel):
    model_config = ConfigDict(ser_json_inf_nan="constants")

    c: float
    cstar: float
    at_threshold: bool
    alpha_finite: Finiteness
    beta_finite: Finiteness
    slope_at_1: SlopeVerdict
    slope_at_0: SlopeVerdict
    wave_type: WaveType
    alpha: float | None = Field(default=None, description="Quadrature value of alpha, -inf when divergent")
    beta: float | None = Field(default=None, description="Quadrature value of beta, +inf when divergent")
    provenance: dict[str, Provenance] = Field(default_factory=dict)
    traces: dict[str, CriterionTrace] = Field(default_factory=dict)

    @property
    def has_conflict(self) -> bool:
        return Provenance.CONFLICT in self.provenance.values()

    def report(self) -> dict:
        return self.model_dump(mode="json")


def wave_type(slope_1: SlopeVerdict, slope_0: SlopeVerdict) -> WaveType:
    if SlopeKind.UNKNOWN in (slope_1.kind, slope_0.kind):
        return WaveType.UNKNOWN
    sharp_1, sharp_0 = slope_1.negative, slope_0.negative
    if sharp_1 and sharp_0:
        return WaveType.SHARP_III
    if sharp_1:
        return WaveType.SHARP_II
    if sharp_0:
        return WaveType.SHARP_I
    return WaveType.CLASSICAL


def _drift_sign(value: float, scale: float) -> Sign:
    if value > 1e-12 * scale:
        return Sign.POSITIVE
    if value < -1e-12 * scale:
        return Sign.NEGATIVE
    return Sign.ZERO


def _merge(analytic: Finiteness, numeric: Finiteness | None) -> tuple[Finiteness, Provenance]:
    if numeric is None or numeric == Finiteness.UNKNOWN:
        return analytic, Provenance.ANALYTIC
    if analytic == Finiteness.UNKNOWN:
        return numeric, Provenance.NUMERIC
    if analytic == numeric:
        return analytic, Provenance.BOTH
    return analytic, Provenance.CONFLICT


def _from_time(value: float | None) -> Finiteness | None:
    if value is None:
        return None
    return Finiteness.INFINITE if math.isinf(value) else Finiteness.FINITE


def _coherent(verdict: Finiteness, slope: SlopeVerdict, provenance: Provenance) -> tuple[Finiteness, Provenance]:
    """A negative endpoint slope forces a finite arrival time."""
    if not slope.negative:
        return verdict, provenance
    if verdict == Finiteness.INFINITE:
        return verdict, Provenance.CONFLICT
    return Finiteness.FINITE, provenance


def classify(
    c: float,
    estimate: WaveSpeedEstimate,
    cs: CoefficientSet,
    limits: EndpointLimits | None = None,
    solution: ReducedSolution | None = None,
) -> WaveClassification:
    """
    Classify the travelling wave of speed c.

    Args:
        c: Speed, at least c* up to the bracket tolerance
        estimate: Result of the c* computation
        cs: Coefficient set
        limits: Precomputed endpoint limits
        solution: Reduced solution at speed c for the quadrature cross-check

    Returns:
        WaveClassification with per-field provenance

    Raises:
        InadmissibleSpeed: If c is below the c* bracket
    """
    slack = threshold_slack(estimate)
    if c < estimate.lower - slack:
        raise InadmissibleSpeed(f"no travelling wave below c* = {estimate.cstar:.6g} (requested c = {c:.6g})")
    limits = limits or endpoint_limits(cs, strict=False)
    at_threshold = is_threshold(c, estimate)

    g0, f0, g1, f1 = (float(v) for v in (cs.g(0.0), cs.f(0.0), cs.g(1.0), cs.f(1.0)))
    if at_threshold:
        sign_0 = sign_at_zero(cs, estimate, limits)
        sign_1 = sign_at_one(cs, estimate)
        drift_0 = estimate.cstar * g0 - f0
        drift_1 = estimate.cstar * g1 - f1
    else:
        drift_0, drift_1 = c * g0 - f0, c * g1 - f1
        sign_0 = _drift_sign(drift_0, max(abs(c * g0), abs(f0), 1.0))
        sign_1 = _drift_sign(drift_1, max(abs(c * g1), abs(f1), 1.0))

    beta_verdict: EndpointVerdict = beta_finiteness(cs, limits, at_threshold, sign_0)
    alpha_verdict: EndpointVerdict = alpha_finiteness(cs, limits, sign_1)
    s0 = slope_at_zero(cs, limits, at_threshold, sign_0, drift_0 if sign_0 == Sign.POSITIVE else None)
    s1 = slope_at_one(cs, limits, sign_1, drift_1)

    alpha = beta = None
    if solution is not None:
        try:
            beta = time_to_zero(solution, cs, limits)
        except UndecidableTail as exc:
            logger.info("Quadrature for beta left undecided: %s", exc)
        try:
            alpha = time_to_one(solution, cs)
        except UndecidableTail as exc:
            logger.info("Quadrature for alpha left undecided: %s", exc)

    beta_finite, beta_source = _merge(beta_verdict.finiteness, _from_time(beta))
    alpha_finite, alpha_source = _merge(alpha_verdict.finiteness, _from_time(alpha))
    beta_finite, beta_source = _coherent(beta_finite, s0, beta_source)
    alpha_finite, alpha_source = _coherent(alpha_finite, s1, alpha_source)

    result = WaveClassification(
        c=c,
        cstar=estimate.cstar,
        at_threshold=at_threshold,
        alpha_finite=alpha_finite,
        beta_finite=beta_finite,
        slope_at_1=s1,
        slope_at_0=s0,
        wave_type=wave_type(s1, s0),
        alpha=alpha,
        beta=beta,
        provenance={
            "alpha_finite": alpha_source,
            "beta_finite": beta_source,
            "slope_at_1": Provenance.ANALYTIC,
            "slope_at_0": Provenance.ANALYTIC,
        },
        traces={"alpha_finite": alpha_verdict.trace, "beta_finite": beta_verdict.trace},
    )
    if result.has_conflict:
        logger.warning("Classification conflict at c=%.6g: %s", c, result.provenance)
    logger.info("c=%.6g classified as %s (alpha %s, beta %s)", c, result.wave_type.value, alpha_finite.value, beta_finite.value)
    return result
