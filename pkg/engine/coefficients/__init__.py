"""Coefficient parsing, hypotheses and endpoint asymptotics."""
from engine.coefficients.expression import Coefficient, parse_coefficient
from engine.coefficients.limits import chain_condition, endpoint_limits, power_fit
from engine.coefficients.model import (
    CoefficientSet,
    EndpointAsymptotics,
    EndpointLimits,
    LimitConfidence,
    LimitValue,
    PowerLawMeta,
)
from engine.coefficients.validation import ValidationReport, validate_hypotheses

__all__ = [
    "Coefficient",
    "CoefficientSet",
    "EndpointAsymptotics",
    "EndpointLimits",
    "LimitConfidence",
    "LimitValue",
    "PowerLawMeta",
    "ValidationReport",
    "chain_condition",
    "endpoint_limits",
    "parse_coefficient",
    "power_fit",
    "validate_hypotheses",
]
