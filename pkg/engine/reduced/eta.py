"""
Roots of the endpoint characteristic equations.

With s = t^(1/(p-1)) both equations become polynomial-like in s:
    eta0: s^p - a s + h0 = 0,   a = c g(0) - f(0)
    eta1: s^p + b s - h1 = 0,   b = c g(1) - f(1)
and the roots in t are s^(p-1).
"""
import math
from enum import Enum

from pydantic import BaseModel, ConfigDict
from scipy import optimize


class SlopeFlag(str, Enum):
    NONDIFFERENTIABLE = "nondifferentiable"


class EtaRoots(BaseModel):
    """Non-negative roots r0_minus <= r0_plus of eta0 (both None if there are none)."""

    model_config = ConfigDict(frozen=True)

    r0_minus: float | None
    r0_plus: float | None

    @property
    def exist(self) -> bool:
        return self.r0_plus is not None


def eta0_threshold(p: float, h0: float) -> float:
    """Smallest a = c g(0) - f(0) for which eta0 has a root."""
    return p / (p - 1.0) * (p - 1.0) ** (1.0 / p) * h0 ** ((p - 1.0) / p)


def eta0_roots(c: float, g0: float, f0: float, h0: float, p: float) -> EtaRoots:
    """
    Non-negative roots of t^(p/(p-1)) - (c g0 - f0) t^(1/(p-1)) + h0.

    Args:
        c: Speed
        g0: g(0)
        f0: f(0)
        h0: lim h(u)/u^(1/(p-1)) at 0, finite and non-negative
        p: Exponent, p > 1

    Returns:
        EtaRoots; both None when no root exists
    """
    a = c * g0 - f0
    if h0 == 0.0 and a <= 0.0:
        return EtaRoots(r0_minus=0.0, r0_plus=0.0)
    if a <= 0.0:
        return EtaRoots(r0_minus=None, r0_plus=None)

    def phi(s: float) -> float:
        return s**p - a * s + h0

    s_star = (a / p) ** (1.0 / (p - 1.0))
    minimum = phi(s_star)
    scale = max(h0, a * s_star, 1e-300)
    if minimum > 1e-12 * scale:
        return EtaRoots(r0_minus=None, r0_plus=None)
    if minimum >= -1e-12 * scale:
        t = s_star ** (p - 1.0)
        return EtaRoots(r0_minus=t, r0_plus=t)

    s_high = a ** (1.0 / (p - 1.0))
    s_plus = optimize.brentq(phi, s_star, s_high, xtol=1e-15) if phi(s_high) > 0 else s_high
    s_minus = 0.0 if h0 == 0.0 else optimize.brentq(phi, 0.0, s_star, xtol=1e-15)
    return EtaRoots(r0_minus=s_minus ** (p - 1.0), r0_plus=s_plus ** (p - 1.0))


def eta1_root(c: float, g1: float, f1: float, h1: float, p: float) -> float | SlopeFlag:
    """
    The slope |z'(1)| from the positive root of t^(p/(p-1)) + (c g1 - f1) t^(1/(p-1)) - h1.

    Returns:
        The root for 0 < h1 < inf; |min(0, c g1 - f1)| for h1 = 0;
        SlopeFlag.NONDIFFERENTIABLE for h1 = inf
    """
    b = c * g1 - f1
    if math.isinf(h1):
        return SlopeFlag.NONDIFFERENTIABLE
    if h1 == 0.0:
        return abs(min(0.0, b))

    def phi(s: float) -> float:
        return s**p + b * s - h1

    s_high = 1.0
    while phi(s_high) <= 0.0:
        s_high *= 2.0
    s = optimize.brentq(phi, 0.0, s_high, xtol=1e-15)
    return s ** (p - 1.0)
