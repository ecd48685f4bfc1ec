"""
Exception hierarchy for the wave engine.

Mathematical verdicts (a failed hypothesis, an undecided classification) are
returned as report values; only conditions that stop a computation raise.
"""


class WavefrontError(Exception):
    """Base class for every error raised by the engine."""


class ExpressionSyntaxError(WavefrontError, ValueError):
    """Coefficient expression could not be parsed."""

    def __init__(self, message: str, position: int, token: str = ""):
        self.position = position
        self.token = token
        super().__init__(f"{message} at offset {position}" + (f" near '{token}'" if token else ""))


class DomainError(WavefrontError, ValueError):
    """Expression evaluated outside its domain (log of a negative, 0/0, ...)."""


class OscillatingLimit(WavefrontError):
    """Endpoint limit did not stabilize on the dyadic sample grid."""


class FitFailed(WavefrontError):
    """Power fit impossible (non-positive or non-finite samples)."""


class InfiniteH0(WavefrontError):
    """h/u^(1/(p-1)) is unbounded at 0, so no wave exists for any speed."""


class NoAsymptotics(WavefrontError):
    """Singular endpoint needs power-law metadata that was not supplied."""


class StepFailure(WavefrontError):
    """ODE integrator could not advance."""


class BoundViolation(WavefrontError):
    """Reduced solution broke an a priori bound that holds for every solution."""


class NoExistence(WavefrontError):
    """No travelling wave exists for any speed."""


class BracketFailure(WavefrontError):
    """Shooting bracket is inconsistent with a monotone threshold."""


class DegenerateDenominator(WavefrontError):
    """g(0) or the infimum of the running mean of g is numerically zero."""


class UndecidableTail(WavefrontError):
    """Local exponent of an improper integrand sits within the margin of -1."""


class InconsistentEndpoint(WavefrontError):
    """Profile reconstruction disagrees with the predicted endpoint time."""


class InadmissibleSpeed(WavefrontError, ValueError):
    """Requested speed lies below the minimal speed."""
