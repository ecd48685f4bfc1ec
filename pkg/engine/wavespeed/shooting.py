"""
Minimal speed by bisection on backward shots.

A shot at speed c reaches the origin (z/u settles at or below the largest
root of eta0) exactly when c >= c*. The analytic bracket seeds the
bisection; the upper end is expanded when its shot still misses. Extra
shots below and above the final bracket revalidate the ordering of the
outcomes in c, which the bisection takes for granted.
"""
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict

from engine.coefficients.limits import endpoint_limits
from engine.coefficients.model import CoefficientSet, EndpointLimits
from engine.errors import BracketFailure
from engine.reduced.eta import eta0_roots
from engine.reduced.integrator import integrate_from_origin, shoot
from engine.reduced.solution import ReducedSolution
from engine.wavespeed.bounds import SpeedBounds, speed_bounds
from shared.config import settings

logger = logging.getLogger(__name__)

# Relative gap at which the bracketing shots are considered to have separated
SEPARATION = 1e-4
# Revalidation shots keep this many tolerances away from the final bracket
CHECK_MARGIN = 10.0


class WaveSpeedEstimate(BaseModel):
    """Numeric c* with its bracket and the slope z'(0+) observed at threshold."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    cstar: float
    half_width: float
    lower: float
    upper: float
    analytic: SpeedBounds
    slope_at_zero: float | None = None
    r0_plus: float | None = None
    r0_minus: float | None = None
    shots: int = 0
    critical: ReducedSolution | None = None

    def report(self) -> dict:
        return self.model_dump(mode="json", exclude={"critical"})


def _straddle_slope(below: ReducedSolution, above: ReducedSolution) -> float | None:
    """
    z/u where the shots on both sides of c* part ways.

    Both shots follow the critical solution until their separation grows,
    so the ratio just before that point approximates z'(0+) at c*.
    """
    u = above.u[above.u <= 0.5]
    if u.size == 0:
        return None
    t_above = above.z_at(u) / u
    t_below = below.z_at(u) / u
    gap = np.abs(t_below - t_above) / np.maximum(np.abs(t_above), 1e-300)
    together = np.nonzero(gap <= SEPARATION)[0]
    if together.size == 0:
        return None
    last = together[-1]
    return float(0.5 * (t_above[last] + t_below[last]))


def _check_monotone(observations: list[tuple[float, bool]]) -> None:
    """Every speed that reached the origin must lie above every speed that missed it."""
    hits = [c for c, reached in observations if reached]
    misses = [c for c, reached in observations if not reached]
    if hits and misses and min(hits) <= max(misses):
        raise BracketFailure(
            f"shots are not monotone in c: c={min(hits):.10g} reaches the origin "
            f"but c={max(misses):.10g} misses it"
        )


def revalidation_speeds(lower: float, lo: float, hi: float, tol: float) -> list[float]:
    """Speeds spread from the analytic lower bound up to just below the final bracket, and one just above it."""
    below: list[float] = []
    top = lo - CHECK_MARGIN * tol
    if settings.monotonicity_checks and top > lower:
        below = np.linspace(lower, top, settings.monotonicity_checks + 1)[1:].tolist()
    return below + [hi + CHECK_MARGIN * tol]


def _critical_solution(cs: CoefficientSet, c: float, shot: ReducedSolution, slope: float) -> ReducedSolution:
    """Backward shot above 1/2 spliced with the branch leaving the origin along the r0+ ray."""
    origin = integrate_from_origin(c, cs, slope, shot.u_floor)
    upper = [branch for branch in shot.branches if branch.u_low >= 0.5 - 1e-12]
    return shot.resampled(upper + [origin], settings.samples_per_decade, c=c, terminal_ratio=slope)


def cstar(
    cs: CoefficientSet,
    tol: float | None = None,
    limits: EndpointLimits | None = None,
    bounds: SpeedBounds | None = None,
) -> WaveSpeedEstimate:
    """
    Compute c* to the requested tolerance.

    Args:
        cs: Coefficient set
        tol: Width of the final bracket (default from settings)
        limits: Precomputed endpoint limits
        bounds: Precomputed analytic bracket

    Returns:
        Estimate whose bracket contains c*, with the observed slope at 0

    Raises:
        NoExistence: If ell0 is infinite
        BracketFailure: If the upper end never reaches the origin or some
            shot reaches it below a speed whose shot missed
    """
    tol = tol or settings.default_tol
    limits = limits or endpoint_limits(cs)
    bounds = bounds or speed_bounds(cs, limits)
    g0, f0, h0 = float(cs.g(0.0)), float(cs.f(0.0)), limits.ell0.value
    observations: list[tuple[float, bool]] = []

    def reaches(c: float) -> tuple[bool, ReducedSolution]:
        solution = shoot(c, cs, limits)
        observations.append((c, solution.reached_origin))
        logger.debug("c=%.10g outcome=%s ratio=%s", c, solution.outcome.value, solution.terminal_ratio)
        return solution.reached_origin, solution

    lo, hi = bounds.lower, bounds.upper
    lo_ok, lo_shot = reaches(lo)
    if lo_ok:
        # The analytic lower bound is attained
        roots = eta0_roots(lo, g0, f0, h0, cs.p)
        estimate = WaveSpeedEstimate(
            cstar=lo, half_width=0.0, lower=lo, upper=lo, analytic=bounds,
            slope_at_zero=lo_shot.terminal_ratio, r0_plus=roots.r0_plus, r0_minus=roots.r0_minus,
            shots=len(observations), critical=lo_shot,
        )
        logger.info("c* = %.8g attained at the analytic lower bound", lo)
        return estimate

    if not math.isfinite(hi):
        hi = lo + 1.0
    hi_ok, hi_shot = reaches(hi)
    expansions = 0
    while not hi_ok:
        if expansions >= settings.max_bracket_expansions:
            raise BracketFailure(f"shot at c={hi:g} still misses the origin after {expansions} expansions")
        lo, lo_shot = hi, hi_shot
        hi = bounds.lower + 2.0 * max(hi - bounds.lower, 10.0 * tol)
        hi_ok, hi_shot = reaches(hi)
        expansions += 1
    if expansions:
        logger.warning("Upper bracket expanded %d time(s) to %.6g", expansions, hi)

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        ok, shot = reaches(mid)
        if ok:
            hi, hi_shot = mid, shot
        else:
            lo, lo_shot = mid, shot

    for c in revalidation_speeds(bounds.lower, lo, hi, tol):
        reaches(c)
    _check_monotone(observations)

    c_mid = 0.5 * (lo + hi)
    roots = eta0_roots(c_mid, g0, f0, h0, cs.p)
    slope = _straddle_slope(lo_shot, hi_shot)
    if slope is None:
        slope = hi_shot.terminal_ratio
    critical = hi_shot
    if roots.r0_plus:
        critical = _critical_solution(cs, c_mid, hi_shot, roots.r0_plus)
    estimate = WaveSpeedEstimate(
        cstar=c_mid, half_width=0.5 * (hi - lo), lower=lo, upper=hi, analytic=bounds,
        slope_at_zero=slope, r0_plus=roots.r0_plus, r0_minus=roots.r0_minus, shots=len(observations),
        critical=critical,
    )
    logger.info("c* = %.8g +- %.2g after %d shots", estimate.cstar, estimate.half_width, estimate.shots)
    return estimate


def threshold_slack(estimate: WaveSpeedEstimate) -> float:
    return max(estimate.half_width, settings.default_tol)


def is_threshold(c: float, estimate: WaveSpeedEstimate) -> bool:
    """True when c cannot be told apart from c* at the bracket resolution."""
    return c <= estimate.upper + 10.0 * threshold_slack(estimate)


def solution_at(c: float, estimate: WaveSpeedEstimate, cs: CoefficientSet, limits: EndpointLimits | None = None) -> ReducedSolution:
    """Reduced solution for speed c: the critical solution at threshold, a fresh shot above it."""
    if is_threshold(c, estimate) and estimate.critical is not None:
        return estimate.critical
    return shoot(c, cs, limits)
