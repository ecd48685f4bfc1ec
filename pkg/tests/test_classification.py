"""
Unit Tests for the finiteness criteria, endpoint slopes, the power-law oracle and classify
"""
import pytest

from engine.classification.classifier import Provenance, WaveType, classify, wave_type
from engine.classification.criteria import Finiteness, alpha_finiteness, beta_finiteness
from engine.classification.integrals import integral_converges, reciprocal_reaction
from engine.classification.power_law import (
    admissible_at_zero,
    alpha_oracle,
    beta_oracle,
    power_law_instance,
)
from engine.classification.slopes import SlopeKind, SlopeVerdict, slope_at_one, slope_at_zero
from engine.coefficients.limits import Convergence, endpoint_limits
from engine.errors import InadmissibleSpeed
from engine.reduced.integrator import shoot
from engine.tools.sweep import Agreement, admissible_grid, agreement_summary, sweep_power_law
from engine.wavespeed.estimates import Sign

GRID = dict(p_values=[1.5, 2.0, 3.0], deltas=[0.0, 0.5, 1.0, 2.0], rs=[0.5, 1.0, 1.5])


@pytest.mark.unit
def test_integral_convergence_by_exponent():
    """Test the analytic and fitted convergence paths"""
    assert integral_converges(lambda u: u**-0.5, 0, "u^-1/2", exponent=-0.5).outcome == Convergence.CONVERGENT
    fitted = integral_converges(lambda u: 1.0 / u, 0, "1/u")
    assert fitted.source == "fitted"
    assert fitted.outcome == Convergence.DIVERGENT
    assert integral_converges(lambda u: 2.0 * (1.0 - u) ** -0.25, 1, "dist^-1/4").outcome == Convergence.CONVERGENT


@pytest.mark.unit
def test_reciprocal_reaction_uses_descriptor(fisher):
    """Test that metadata short-cuts the fit"""
    test = reciprocal_reaction(fisher, 0)
    assert test.source == "analytic"
    assert test.exponent == pytest.approx(-1.0)
    assert test.outcome == Convergence.DIVERGENT
    assert reciprocal_reaction(fisher.without_metadata(), 0).outcome == Convergence.DIVERGENT


@pytest.mark.unit
def test_beta_criteria(fisher, fisher_limits, degenerate_fisher, degenerate_limits):
    """Test beta finiteness with positive and zero ell0"""
    assert beta_finiteness(fisher, fisher_limits, True, Sign.POSITIVE).finiteness == Finiteness.INFINITE
    at_threshold = beta_finiteness(degenerate_fisher, degenerate_limits, True, Sign.POSITIVE)
    assert at_threshold.finiteness == Finiteness.FINITE
    assert "diffusion-ratio" in at_threshold.trace.criterion
    above = beta_finiteness(degenerate_fisher, degenerate_limits, False, Sign.POSITIVE)
    assert above.finiteness == Finiteness.INFINITE
    undecided = beta_finiteness(degenerate_fisher, degenerate_limits, True, Sign.UNKNOWN)
    assert undecided.finiteness == Finiteness.UNKNOWN


@pytest.mark.unit
def test_alpha_criteria(fisher, fisher_limits):
    """Test alpha finiteness with positive ell1"""
    verdict = alpha_finiteness(fisher, fisher_limits, Sign.POSITIVE)
    assert verdict.finiteness == Finiteness.INFINITE
    assert verdict.trace.test is not None


@pytest.mark.unit
def test_alpha_in_power_regime():
    """Test the regime with an unbounded h/(1-u)^(1/(p-1)) at 1"""
    cs = power_law_instance(2.0, 0.0, 0.5)
    limits = endpoint_limits(cs, strict=False)
    assert limits.ell1.is_infinite
    verdict = alpha_finiteness(cs, limits, Sign.POSITIVE)
    assert verdict.finiteness == alpha_oracle(2.0, 0.0, 0.5, Sign.POSITIVE).finiteness == Finiteness.FINITE


@pytest.mark.unit
def test_slopes(fisher, fisher_limits, degenerate_fisher, degenerate_limits):
    """Test endpoint slopes with bounded and linear diffusion"""
    assert slope_at_zero(fisher, fisher_limits, True, Sign.POSITIVE, 2.0).kind == SlopeKind.ZERO
    sharp = slope_at_zero(degenerate_fisher, degenerate_limits, True, Sign.POSITIVE, 0.7)
    assert sharp.kind == SlopeKind.NEGATIVE
    assert sharp.value == pytest.approx(-0.7)
    assert slope_at_zero(degenerate_fisher, degenerate_limits, False, Sign.POSITIVE).kind == SlopeKind.ZERO
    assert slope_at_one(degenerate_fisher, degenerate_limits, Sign.POSITIVE).kind == SlopeKind.ZERO


@pytest.mark.unit
@pytest.mark.parametrize("kind_1,kind_0,expected", [
    (SlopeKind.ZERO, SlopeKind.ZERO, WaveType.CLASSICAL),
    (SlopeKind.ZERO, SlopeKind.NEGATIVE, WaveType.SHARP_I),
    (SlopeKind.MINUS_INFINITY, SlopeKind.ZERO, WaveType.SHARP_II),
    (SlopeKind.NEGATIVE, SlopeKind.MINUS_INFINITY, WaveType.SHARP_III),
    (SlopeKind.UNKNOWN, SlopeKind.ZERO, WaveType.UNKNOWN),
])
def test_wave_type(kind_1, kind_0, expected):
    """Test the wave type from the two endpoint slopes"""
    assert wave_type(SlopeVerdict(kind=kind_1), SlopeVerdict(kind=kind_0)) == expected


@pytest.mark.unit
def test_power_law_oracle():
    """Test closed-form verdicts on a few exponents"""
    assert not admissible_at_zero(2.0, 0.0, 0.5)
    with pytest.raises(ValueError, match="infinite ell0"):
        beta_oracle(2.0, 0.0, 0.5, True, Sign.POSITIVE)
    fisher = beta_oracle(2.0, 0.0, 1.0, True, Sign.POSITIVE)
    assert fisher.finiteness == Finiteness.INFINITE
    sharp = beta_oracle(2.0, 1.0, 1.0, True, Sign.POSITIVE)
    assert (sharp.finiteness, sharp.slope) == (Finiteness.FINITE, SlopeKind.NEGATIVE)
    steep = beta_oracle(2.0, 2.0, 1.0, True, Sign.POSITIVE)
    assert (steep.finiteness, steep.slope) == (Finiteness.FINITE, SlopeKind.MINUS_INFINITY)
    assert alpha_oracle(2.0, 0.0, 1.0, Sign.POSITIVE).finiteness == Finiteness.INFINITE


@pytest.mark.unit
def test_zero_drift_at_threshold(zero_drift_at_zero, degenerate_fisher, degenerate_limits):
    """Test beta with ell0 = 0 and c* g(0) = f(0): finite only when int 1/rho converges"""
    limits = endpoint_limits(zero_drift_at_zero, strict=False)
    open_case = beta_finiteness(zero_drift_at_zero, limits, True, Sign.ZERO)
    assert open_case.finiteness == Finiteness.UNKNOWN
    assert open_case.trace.criterion == "one-sided reaction test at threshold"
    assert open_case.trace.test.outcome == Convergence.DIVERGENT
    assert beta_finiteness(degenerate_fisher, degenerate_limits, True, Sign.ZERO).finiteness == Finiteness.UNKNOWN

    root_reaction = power_law_instance(2.0, 1.0, 0.5)
    verdict = beta_finiteness(root_reaction, endpoint_limits(root_reaction, strict=False), True, Sign.ZERO)
    assert verdict.finiteness == Finiteness.FINITE


@pytest.mark.unit
def test_power_law_oracle_with_zero_drift():
    """Test the oracle when c* g(0) = f(0)"""
    assert beta_oracle(2.0, 1.0, 1.0, True, Sign.ZERO).finiteness == Finiteness.UNKNOWN
    assert beta_oracle(2.0, 1.0, 1.0, True, Sign.ZERO).slope == SlopeKind.UNKNOWN
    finite = beta_oracle(2.0, 1.0, 0.5, True, Sign.ZERO)
    assert (finite.finiteness, finite.slope) == (Finiteness.FINITE, SlopeKind.ZERO)


@pytest.mark.unit
def test_admissible_grid_size():
    """Test the number of admissible exponent triples"""
    assert len(admissible_grid(**GRID)) == 31


@pytest.mark.integration
def test_criteria_agree_with_oracle():
    """Test that criteria and oracle never conflict on the exponent grid"""
    rows = sweep_power_law(GRID["p_values"], GRID["deltas"], GRID["rs"])
    assert len(rows) == 62
    conflicts = [(row.p, row.delta, row.r, row.at_threshold) for row in rows if row.agreement == Agreement.CONFLICT]
    assert conflicts == []
    assert agreement_summary(rows)[Agreement.CONFLICT.value] == 0


@pytest.mark.integration
def test_classify_fisher(fisher, fisher_limits, fisher_estimate):
    """Test that Fisher waves are classical at and above threshold"""
    at_c = classify(fisher_estimate.cstar, fisher_estimate, fisher, fisher_limits, fisher_estimate.critical)
    assert at_c.at_threshold
    assert at_c.wave_type == WaveType.CLASSICAL
    assert at_c.beta_finite == Finiteness.INFINITE
    assert at_c.alpha_finite == Finiteness.INFINITE
    assert not at_c.has_conflict

    above = classify(3.0, fisher_estimate, fisher, fisher_limits, shoot(3.0, fisher, fisher_limits))
    assert not above.at_threshold
    assert above.wave_type == WaveType.CLASSICAL
    assert above.provenance["beta_finite"] == Provenance.BOTH


@pytest.mark.integration
def test_classify_degenerate(degenerate_fisher, degenerate_limits, degenerate_estimate):
    """Test the sharp wave at c* and the classical wave above it"""
    cstar = degenerate_estimate.cstar
    at_c = classify(cstar, degenerate_estimate, degenerate_fisher, degenerate_limits, degenerate_estimate.critical)
    assert at_c.wave_type == WaveType.SHARP_I
    assert at_c.beta_finite == Finiteness.FINITE
    assert at_c.provenance["beta_finite"] == Provenance.BOTH
    assert at_c.slope_at_0.value == pytest.approx(-cstar, rel=1e-3)
    assert at_c.beta == pytest.approx(0.6931471805599453 / cstar, rel=1e-3)

    c = cstar + 0.5
    above = classify(c, degenerate_estimate, degenerate_fisher, degenerate_limits)
    assert above.wave_type == WaveType.CLASSICAL
    assert above.beta_finite == Finiteness.INFINITE
    assert above.beta is None
    assert above.report()["wave_type"] == "classical"


@pytest.mark.integration
def test_classify_rejects_slow_speed(degenerate_fisher, degenerate_estimate):
    """Test that speeds below c* are refused"""
    with pytest.raises(InadmissibleSpeed, match="no travelling wave below c\\*"):
        classify(0.3, degenerate_estimate, degenerate_fisher)
