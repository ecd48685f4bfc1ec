"""Endpoint times, endpoint slopes and wave types."""
from engine.classification.classifier import Provenance, WaveClassification, WaveType, classify
from engine.classification.criteria import Finiteness, alpha_finiteness, beta_finiteness
from engine.classification.integrals import IntegralTest, integral_converges
from engine.classification.power_law import alpha_oracle, beta_oracle, power_law_instance
from engine.classification.slopes import SlopeKind, SlopeVerdict, slope_at_one, slope_at_zero

__all__ = [
    "IntegralTest",
    "Finiteness",
    "Provenance",
    "SlopeKind",
    "SlopeVerdict",
    "WaveClassification",
    "WaveType",
    "alpha_finiteness",
    "alpha_oracle",
    "beta_finiteness",
    "beta_oracle",
    "classify",
    "integral_converges",
    "power_law_instance",
    "slope_at_one",
    "slope_at_zero",
]
