"""
Sweeps over power-law exponents or over speeds, evaluated by a parallel map
with results kept in grid order.
"""
import itertools
import logging
from collections import Counter
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from functools import partial

from pydantic import BaseModel

from engine.classification.classifier import Provenance, WaveClassification, classify
from engine.classification.criteria import Finiteness, alpha_finiteness, beta_finiteness
from engine.classification.power_law import (
    admissible_at_one,
    admissible_at_zero,
    alpha_oracle,
    beta_oracle,
    power_law_instance,
)
from engine.classification.slopes import SlopeKind, slope_at_one, slope_at_zero
from engine.coefficients.limits import endpoint_limits
from engine.coefficients.model import CoefficientSet, EndpointLimits
from engine.reduced.integrator import shoot
from engine.wavespeed.estimates import Sign
from engine.wavespeed.shooting import WaveSpeedEstimate, cstar
from shared.config import settings

logger = logging.getLogger(__name__)

# Offset above c* used for the numeric cross-check of the supercritical row
ABOVE_THRESHOLD = 0.5


class Agreement(str, Enum):
    AGREE = "both-agree"
    CONFLICT = "conflict"
    UNKNOWN = "unknown"


class PowerLawRow(BaseModel):
    p: float
    delta: float
    r: float
    at_threshold: bool
    beta_oracle: Finiteness
    beta_criteria: Finiteness
    beta_black_box: Finiteness
    alpha_oracle: Finiteness
    alpha_criteria: Finiteness
    alpha_black_box: Finiteness
    slope_0_oracle: SlopeKind
    slope_0_criteria: SlopeKind
    slope_1_oracle: SlopeKind
    slope_1_criteria: SlopeKind
    beta_numeric: Finiteness | None = None
    alpha_numeric: Finiteness | None = None
    agreement: Agreement


class SpeedRow(BaseModel):
    c: float
    wave_type: str
    alpha_finite: Finiteness
    beta_finite: Finiteness
    slope_at_0: SlopeKind
    slope_at_1: SlopeKind
    conflict: bool


def _compare(groups: Iterable[Sequence[Enum | None]], unknown: Iterable[Enum]) -> Agreement:
    """CONFLICT when two decided values in a group differ; UNKNOWN when a group has none decided."""
    undecided = set(unknown)
    status = Agreement.AGREE
    for values in groups:
        decided = {value for value in values if value is not None and value not in undecided}
        if len(decided) > 1:
            return Agreement.CONFLICT
        if not decided:
            status = Agreement.UNKNOWN
    return status


def admissible_grid(p_values: Iterable[float], deltas: Iterable[float], rs: Iterable[float]) -> list[tuple[float, float, float]]:
    """(p, delta, r) points whose power laws give a finite ell0 and satisfy the condition at 1."""
    return [
        (p, delta, r)
        for p, delta, r in itertools.product(p_values, deltas, rs)
        if admissible_at_zero(p, delta, r) and admissible_at_one(p, delta, r)
    ]


def _numeric_verdicts(cs: CoefficientSet, limits: EndpointLimits) -> dict[bool, WaveClassification]:
    estimate = cstar(cs, limits=limits)
    at_c = classify(estimate.cstar, estimate, cs, limits, estimate.critical)
    c_above = estimate.upper + ABOVE_THRESHOLD
    above = classify(c_above, estimate, cs, limits, shoot(c_above, cs, limits))
    return {True: at_c, False: above}


def power_law_rows(point: tuple[float, float, float], numeric: bool = False) -> list[PowerLawRow]:
    """
    Oracle, general criteria with descriptors and general criteria on the bare
    expressions, at threshold and above it, for f = 0, g = 1.
    """
    p, delta, r = point
    described = power_law_instance(p, delta, r)
    bare = described.without_metadata()
    limits = endpoint_limits(described, strict=False)
    bare_limits = endpoint_limits(bare, strict=False)
    # c* g - f = c* > 0 at both ends
    sign = Sign.POSITIVE
    numeric_results = _numeric_verdicts(described, limits) if numeric else {}

    rows = []
    for at_threshold in (True, False):
        beta_o = beta_oracle(p, delta, r, at_threshold, sign)
        alpha_o = alpha_oracle(p, delta, r, sign)
        beta_c = beta_finiteness(described, limits, at_threshold, sign).finiteness
        alpha_c = alpha_finiteness(described, limits, sign).finiteness
        beta_b = beta_finiteness(bare, bare_limits, at_threshold, sign).finiteness
        alpha_b = alpha_finiteness(bare, bare_limits, sign).finiteness
        s0 = slope_at_zero(described, limits, at_threshold, sign).kind
        s1 = slope_at_one(described, limits, sign).kind
        result = numeric_results.get(at_threshold)
        beta_n = result.beta_finite if result is not None else None
        alpha_n = result.alpha_finite if result is not None else None

        agreement = _compare(
            [
                (beta_o.finiteness, beta_c, beta_b, beta_n),
                (alpha_o.finiteness, alpha_c, alpha_b, alpha_n),
                (beta_o.slope, s0),
                (alpha_o.slope, s1),
            ],
            unknown=(Finiteness.UNKNOWN, SlopeKind.UNKNOWN),
        )
        if result is not None and result.has_conflict:
            agreement = Agreement.CONFLICT
        rows.append(PowerLawRow(
            p=p, delta=delta, r=r, at_threshold=at_threshold,
            beta_oracle=beta_o.finiteness, beta_criteria=beta_c, beta_black_box=beta_b,
            alpha_oracle=alpha_o.finiteness, alpha_criteria=alpha_c, alpha_black_box=alpha_b,
            slope_0_oracle=beta_o.slope, slope_0_criteria=s0,
            slope_1_oracle=alpha_o.slope, slope_1_criteria=s1,
            beta_numeric=beta_n, alpha_numeric=alpha_n, agreement=agreement,
        ))
    return rows


def _speed_row(result: WaveClassification) -> SpeedRow:
    return SpeedRow(
        c=result.c,
        wave_type=result.wave_type.value,
        alpha_finite=result.alpha_finite,
        beta_finite=result.beta_finite,
        slope_at_0=result.slope_at_0.kind,
        slope_at_1=result.slope_at_1.kind,
        conflict=result.has_conflict,
    )


def classify_above(c: float, cs: CoefficientSet, estimate: WaveSpeedEstimate) -> SpeedRow:
    limits = endpoint_limits(cs, strict=False)
    return _speed_row(classify(c, estimate, cs, limits, shoot(c, cs, limits)))


def parallel_map(fn: Callable, items: Sequence, workers: int | None = None) -> list:
    """fn over items in order; more than one worker uses a process pool."""
    workers = workers or settings.sweep_workers
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def sweep_power_law(
    p_values: Iterable[float],
    deltas: Iterable[float],
    rs: Iterable[float],
    numeric: bool = False,
    workers: int | None = None,
) -> list[PowerLawRow]:
    grid = admissible_grid(p_values, deltas, rs)
    logger.info("Power-law sweep over %d admissible points", len(grid))
    chunks = parallel_map(partial(power_law_rows, numeric=numeric), grid, workers)
    return [row for chunk in chunks for row in chunk]


def sweep_speeds(
    cs: CoefficientSet,
    offsets: Sequence[float],
    estimate: WaveSpeedEstimate | None = None,
    workers: int | None = None,
) -> list[SpeedRow]:
    """
    Classify at c* + offset for each offset.

    The threshold row uses the critical solution of the estimate; rows above
    threshold shoot their own reduced solution.
    """
    limits = endpoint_limits(cs, strict=False)
    estimate = estimate or cstar(cs, limits=limits)
    rows: dict[float, SpeedRow] = {}
    if 0.0 in offsets:
        rows[0.0] = _speed_row(classify(estimate.cstar, estimate, cs, limits, estimate.critical))
    above = [offset for offset in offsets if offset > 0.0]
    portable = estimate.model_copy(update={"critical": None})
    speeds = [estimate.upper + offset for offset in above]
    for offset, row in zip(above, parallel_map(partial(classify_above, cs=cs, estimate=portable), speeds, workers)):
        rows[offset] = row
    return [rows[offset] for offset in offsets]


def agreement_summary(rows: Iterable[PowerLawRow]) -> dict[str, int]:
    counts = Counter(row.agreement.value for row in rows)
    return {status.value: counts.get(status.value, 0) for status in Agreement}
