"""
Unit Tests for the speed bracket, the c* computation and the sign tests
"""
import math

import pytest

from engine.classification.power_law import power_law_instance
from engine.coefficients.limits import endpoint_limits
from engine.coefficients.model import CoefficientSet
from engine.errors import BracketFailure, NoExistence
from engine.reduced.eta import eta0_roots
from engine.reduced.integrator import shoot
from engine.reduced.solution import ShotOutcome
from engine.tools.sweep import admissible_grid
from engine.wavespeed.bounds import SpeedBounds, necessary_condition, speed_bounds
from engine.wavespeed.estimates import (
    Sign,
    StimaVerdict,
    critical_constant,
    sign_at_one,
    sign_at_zero,
    stima_test,
)
from engine.wavespeed.shooting import cstar, is_threshold, revalidation_speeds, solution_at

INFINITE_ELL0 = dict(p=2.0, f="0", g="1", d="1", rho="sqrt(u)*(1-u)")
WIDE_BOUNDS = SpeedBounds(lower=1.0, upper=4.0, G0=1.0, F0=0.0, L0=1.0)

POWER_LAW_POINTS = admissible_grid([1.5, 2.0, 3.0], [0.0, 0.5, 1.0, 2.0], [0.5, 1.0, 1.5])
# z/u approaches the larger root at c* like u^e with e = r + delta/(p-1) - 1/(p-1); e = 0 or e >= 1 here
ROOT_POINTS = [
    (1.5, 0.5, 1.0), (2.0, 0.0, 1.0), (2.0, 0.5, 0.5), (3.0, 0.0, 0.5), (1.5, 1.0, 1.0),
    (2.0, 0.5, 1.5), (2.0, 1.0, 1.0), (2.0, 2.0, 1.0), (3.0, 0.0, 1.5), (3.0, 1.0, 1.0),
]
BRACKET_POINTS = ROOT_POINTS + [point for point in POWER_LAW_POINTS if point not in ROOT_POINTS][::2][:10]


@pytest.mark.unit
def test_fisher_bracket_is_tight(fisher, fisher_limits):
    """Test that both analytic bounds equal 2 for Fisher"""
    bounds = speed_bounds(fisher, fisher_limits)
    assert bounds.lower == pytest.approx(2.0, abs=1e-6)
    assert bounds.upper == pytest.approx(2.0, abs=1e-6)


@pytest.mark.unit
def test_degenerate_bracket(degenerate_fisher, degenerate_limits):
    """Test the bracket when ell0 = 0"""
    bounds = speed_bounds(degenerate_fisher, degenerate_limits)
    assert bounds.lower == pytest.approx(0.0)
    assert bounds.upper == pytest.approx(2.0 * math.sqrt(0.1875), rel=1e-3)


@pytest.mark.unit
def test_no_wave_when_ell0_infinite():
    """Test non-existence for every speed"""
    cs = CoefficientSet.from_expressions(**INFINITE_ELL0)
    with pytest.raises(NoExistence, match="no travelling wave for any speed"):
        speed_bounds(cs)
    with pytest.raises(NoExistence):
        cstar(cs)


@pytest.mark.unit
def test_necessary_condition():
    """Test c int g > int f"""
    cs = CoefficientSet.from_expressions(p=2.0, f="2", g="1", d="1", rho="u*(1-u)")
    assert not necessary_condition(cs, 1.0)
    assert necessary_condition(cs, 2.5)


@pytest.mark.integration
def test_fisher_cstar(fisher_estimate):
    """Test the classical speed 2"""
    assert fisher_estimate.cstar == pytest.approx(2.0, abs=1e-3)
    assert fisher_estimate.lower <= fisher_estimate.cstar <= fisher_estimate.upper
    assert "critical" not in fisher_estimate.report()


@pytest.mark.integration
def test_degenerate_cstar(degenerate_estimate):
    """Test c* for d = u against 1/sqrt(2)"""
    assert 0.70 <= degenerate_estimate.cstar <= 0.715
    assert degenerate_estimate.half_width <= 1e-4
    assert degenerate_estimate.critical.outcome == ShotOutcome.REACHED_ORIGIN


@pytest.mark.integration
def test_critical_slope_is_largest_root(degenerate_estimate):
    """Test that z/u at 0 approaches the larger eta0 root at c*"""
    assert degenerate_estimate.r0_plus == pytest.approx(degenerate_estimate.cstar, rel=1e-9)
    assert degenerate_estimate.slope_at_zero == pytest.approx(degenerate_estimate.r0_plus, rel=2e-2)
    critical = degenerate_estimate.critical
    assert critical.z_at(1e-5) / 1e-5 == pytest.approx(degenerate_estimate.r0_plus, rel=1e-3)


@pytest.fixture(scope="module")
def power_law_estimate():
    """c* per power-law point, computed once per module"""
    cache = {}

    def estimate(point):
        if point not in cache:
            cs = power_law_instance(*point)
            limits = endpoint_limits(cs, strict=False)
            bounds = speed_bounds(cs, limits)
            cache[point] = (cs, limits, bounds, cstar(cs, tol=1e-3, limits=limits, bounds=bounds))
        return cache[point]

    return estimate


@pytest.mark.integration
@pytest.mark.parametrize("point", BRACKET_POINTS)
def test_bracket_contains_cstar(power_law_estimate, point):
    """Test lower <= c* <= upper on power-law instances"""
    _, _, bounds, estimate = power_law_estimate(point)
    assert bounds.lower <= estimate.cstar + 1e-3 <= bounds.upper + 2e-3
    assert estimate.half_width <= 5e-4


@pytest.mark.integration
@pytest.mark.parametrize("point", ROOT_POINTS)
def test_origin_slopes_follow_eta0_roots(power_law_estimate, point):
    """Test z/u at 0: the larger eta0 root at c*, the smaller one at c* + 0.5"""
    cs, limits, _, estimate = power_law_estimate(point)
    g0, f0, ell0 = float(cs.g(0.0)), float(cs.f(0.0)), limits.ell0.value

    at_upper = eta0_roots(estimate.upper + 1e-9, g0, f0, ell0, cs.p)
    assert at_upper.exist
    assert estimate.critical.z_at(1e-5) / 1e-5 == pytest.approx(at_upper.r0_plus, rel=1e-2)

    c_above = estimate.cstar + 0.5
    roots = eta0_roots(c_above, g0, f0, ell0, cs.p)
    above = shoot(c_above, cs, limits)
    assert above.reached_origin
    assert abs(above.terminal_ratio - roots.r0_minus) < abs(above.terminal_ratio - roots.r0_plus)


def _fake_shot(mocker, reached: bool):
    outcome = ShotOutcome.REACHED_ORIGIN if reached else ShotOutcome.MISSED_ORIGIN
    return mocker.Mock(reached_origin=reached, outcome=outcome, terminal_ratio=None)


@pytest.mark.unit
def test_non_monotone_shots_detected(fisher, fisher_limits, mocker):
    """Test that a speed reaching the origin below one that misses is reported"""
    mocker.patch(
        "engine.wavespeed.shooting.shoot",
        side_effect=lambda c, cs, limits: _fake_shot(mocker, c >= 3.0 or 1.4 <= c <= 1.6),
    )
    with pytest.raises(BracketFailure, match="not monotone"):
        cstar(fisher, tol=1e-3, limits=fisher_limits, bounds=WIDE_BOUNDS)


@pytest.mark.unit
def test_revalidation_shots(fisher, fisher_limits, mocker):
    """Test that monotone shots pass and end with the revalidation speeds"""
    shot = mocker.patch(
        "engine.wavespeed.shooting.shoot",
        side_effect=lambda c, cs, limits: _fake_shot(mocker, c >= 3.0),
    )
    mocker.patch("engine.wavespeed.shooting._straddle_slope", return_value=1.0)
    mocker.patch("engine.wavespeed.shooting._critical_solution", return_value=None)
    estimate = cstar(fisher, tol=1e-3, limits=fisher_limits, bounds=WIDE_BOUNDS)

    assert estimate.lower < 3.0 <= estimate.upper
    assert estimate.upper - estimate.lower <= 1e-3
    speeds = [call.args[0] for call in shot.call_args_list]
    assert estimate.shots == len(speeds)
    checks = revalidation_speeds(WIDE_BOUNDS.lower, estimate.lower, estimate.upper, 1e-3)
    assert len(checks) == 5
    assert speeds[-5:] == checks
    assert checks[-1] == pytest.approx(estimate.upper + 1e-2)


@pytest.mark.unit
def test_revalidation_next_to_lower_bound():
    """Test that only the check above remains when the bracket sits on the lower bound"""
    assert revalidation_speeds(2.0, 2.0005, 2.001, 1e-3) == [pytest.approx(2.011)]


@pytest.mark.unit
def test_critical_constant():
    """Test p^p/(p-1)^(p-1)"""
    assert critical_constant(2.0) == pytest.approx(4.0)
    assert critical_constant(3.0) == pytest.approx(27.0 / 4.0)


@pytest.mark.unit
def test_sign_test_on_fisher(fisher):
    """Test both conclusive verdicts of the sign test"""
    assert stima_test(fisher, 1.9) == StimaVerdict.PROVES_GREATER
    assert stima_test(fisher, 2.0) == StimaVerdict.PROVES_LESS_EQ
    assert stima_test(fisher, 0.0) == StimaVerdict.PROVES_GREATER


@pytest.mark.integration
@pytest.mark.parametrize("name,k", [
    ("fisher", 1.0), ("fisher", 1.9), ("fisher", 2.0), ("fisher", 2.5),
    ("degenerate_fisher", 0.0), ("degenerate_fisher", 0.3), ("degenerate_fisher", 0.5),
    ("degenerate_fisher", 1.0), ("degenerate_fisher", 2.0), ("fisher", 3.0),
])
def test_sign_test_never_contradicts_shooting(request, name, k):
    """Test that conclusive sign-test verdicts agree with the shot c*"""
    cs = request.getfixturevalue(name)
    estimate = request.getfixturevalue("fisher_estimate" if name == "fisher" else "degenerate_estimate")
    verdict = stima_test(cs, k)
    if verdict == StimaVerdict.PROVES_GREATER:
        assert estimate.cstar > k
    elif verdict == StimaVerdict.PROVES_LESS_EQ:
        assert estimate.cstar <= k + 1e-3


@pytest.mark.integration
def test_drift_signs(degenerate_fisher, degenerate_limits, degenerate_estimate):
    """Test the signs of c* g - f at both endpoints"""
    assert sign_at_zero(degenerate_fisher, degenerate_estimate, degenerate_limits) == Sign.POSITIVE
    assert sign_at_one(degenerate_fisher, degenerate_estimate) == Sign.POSITIVE


@pytest.mark.integration
def test_solution_at_uses_critical(degenerate_fisher, degenerate_limits, degenerate_estimate):
    """Test the choice of reduced solution at and above threshold"""
    assert is_threshold(degenerate_estimate.cstar, degenerate_estimate)
    assert solution_at(degenerate_estimate.cstar, degenerate_estimate, degenerate_fisher) is degenerate_estimate.critical
    above = solution_at(degenerate_estimate.cstar + 0.5, degenerate_estimate, degenerate_fisher, degenerate_limits)
    assert above.c == pytest.approx(degenerate_estimate.cstar + 0.5)
    assert above.reached_origin
    assert above.terminal_ratio < degenerate_estimate.r0_plus


@pytest.mark.unit
def test_sign_at_zero_vanishes(zero_drift_at_zero, mocker):
    """Test the zero verdict when the sign test bounds c* by f(0)/g(0)"""
    limits = endpoint_limits(zero_drift_at_zero, strict=False)
    assert limits.ell0.is_zero
    assert stima_test(zero_drift_at_zero, 0.0) == StimaVerdict.PROVES_LESS_EQ
    assert sign_at_zero(zero_drift_at_zero, mocker.Mock(), limits) == Sign.ZERO
