"""
Problem data: the exponent p, the four coefficients and optional power-law
descriptors of d and rho at the endpoints.
"""
import math
from enum import Enum
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from engine.coefficients.expression import Coefficient, parse_coefficient

Endpoint = Literal[0, 1]


class PowerLawMeta(BaseModel):
    """Asymptotic fn(u) ~ constant * distance^exponent at an endpoint."""

    model_config = ConfigDict(frozen=True)

    constant: float = Field(gt=0, description="Leading constant k")
    exponent: float = Field(description="Power of the distance to the endpoint")
    endpoint: Endpoint = 0


class EndpointAsymptotics(BaseModel):
    """Power-law descriptors of d and rho at one endpoint."""

    model_config = ConfigDict(frozen=True)

    d: PowerLawMeta | None = None
    rho: PowerLawMeta | None = None
    chain_condition: bool | None = Field(
        default=None,
        description="User assertion that d*rho^(p-1) satisfies the chain condition (None = auto-detect)",
    )

    @property
    def complete(self) -> bool:
        return self.d is not None and self.rho is not None


class CoefficientSet(BaseModel):
    """
    Coefficients of (d(u)|u'|^(p-2)u')' + (c g(u) - f(u)) u' + rho(u) = 0.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    p: float = Field(gt=1.0, description="Exponent of the p-Laplacian")
    f: Coefficient
    g: Coefficient
    d: Coefficient
    rho: Coefficient
    endpoint_meta_0: EndpointAsymptotics = Field(default_factory=EndpointAsymptotics)
    endpoint_meta_1: EndpointAsymptotics = Field(default_factory=EndpointAsymptotics)

    @field_validator("f", "g", "d", "rho", mode="before")
    @classmethod
    def _parse(cls, value):
        if isinstance(value, str):
            return parse_coefficient(value)
        return value

    @classmethod
    def from_expressions(
        cls,
        p: float,
        f: str,
        g: str,
        d: str,
        rho: str,
        endpoint_meta_0: EndpointAsymptotics | None = None,
        endpoint_meta_1: EndpointAsymptotics | None = None,
    ) -> "CoefficientSet":
        return cls(
            p=p,
            f=f,
            g=g,
            d=d,
            rho=rho,
            endpoint_meta_0=endpoint_meta_0 or EndpointAsymptotics(),
            endpoint_meta_1=endpoint_meta_1 or EndpointAsymptotics(),
        )

    @property
    def q(self) -> float:
        """1/(p-1), the exponent relating z to |u'|."""
        return 1.0 / (self.p - 1.0)

    @property
    def p_conjugate(self) -> float:
        return self.p / (self.p - 1.0)

    @property
    def threshold_constant(self) -> float:
        """p'(p-1)^(1/p), the factor in the discriminant of eta0."""
        return self.p_conjugate * (self.p - 1.0) ** (1.0 / self.p)

    def meta(self, endpoint: Endpoint) -> EndpointAsymptotics:
        return self.endpoint_meta_0 if endpoint == 0 else self.endpoint_meta_1

    def h(self, u):
        """h(u) = d(u)^(1/(p-1)) rho(u)."""
        with np.errstate(invalid="ignore", over="ignore"):
            return np.power(self.d(u), self.q) * self.rho(u)

    def drift(self, c: float, u):
        """c g(u) - f(u)."""
        return c * self.g(u) - self.f(u)

    def drift_bound(self, c: float, grid: int = 1024) -> float:
        """M = max |c g - f| over a grid including both endpoints."""
        u = np.linspace(0.0, 1.0, grid + 1)
        return float(np.max(np.abs(self.drift(c, u))))

    def h_exponent(self, endpoint: Endpoint) -> tuple[float, float] | None:
        """Constant and exponent of h ~ C dist^lambda when both descriptors are known."""
        meta = self.meta(endpoint)
        if not meta.complete:
            return None
        constant = meta.rho.constant * meta.d.constant ** self.q
        exponent = meta.rho.exponent + meta.d.exponent * self.q
        return constant, exponent

    def without_metadata(self) -> "CoefficientSet":
        return self.model_copy(update={"endpoint_meta_0": EndpointAsymptotics(), "endpoint_meta_1": EndpointAsymptotics()})


class LimitConfidence(str, Enum):
    ANALYTIC = "analytic"
    EXTRAPOLATED = "extrapolated"
    UNKNOWN = "unknown"


class LimitValue(BaseModel):
    """A limit that may be 0, finite positive, +-infinity, or unknown."""

    model_config = ConfigDict(frozen=True)

    value: float = math.nan
    confidence: LimitConfidence = LimitConfidence.UNKNOWN

    @property
    def known(self) -> bool:
        return self.confidence != LimitConfidence.UNKNOWN and not math.isnan(self.value)

    @property
    def is_zero(self) -> bool:
        return self.known and self.value == 0.0

    @property
    def is_infinite(self) -> bool:
        return self.known and math.isinf(self.value)

    @property
    def is_finite_positive(self) -> bool:
        return self.known and 0.0 < self.value < math.inf


class EndpointLimits(BaseModel):
    """Endpoint limits controlling existence, timing and slopes."""

    model_config = ConfigDict(frozen=True)

    ell0: LimitValue
    ell1: LimitValue
    d_at_0: LimitValue
    d_at_1: LimitValue
    ddot_0: LimitValue
    ddot_1: LimitValue

    @property
    def h0(self) -> LimitValue:
        """lim h(u)/u^(1/(p-1)); identical to ell0."""
        return self.ell0

    @property
    def h1(self) -> LimitValue:
        """lim h(u)/(1-u)^(1/(p-1)); identical to ell1."""
        return self.ell1
