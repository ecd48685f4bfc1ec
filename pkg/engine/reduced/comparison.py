"""
Comparison checks between a candidate function and a computed solution of
the reduced equation.

With F(u, y) = c g - f - h / y^(1/(p-1)):
    lower-solution  y' <= F(u, y); above z at the right end of the window
                    means above z on the whole window
    upper-solution  y' >= F(u, y); above z at the left end of the window
                    means above z on the whole window

A lower-solution that vanishes at 1 together with z needs no anchor.
"""
import logging
from collections.abc import Callable
from typing import Literal

import numpy as np

from engine.coefficients.model import CoefficientSet
from engine.reduced.solution import ReducedSolution

logger = logging.getLogger(__name__)

CHECK_POINTS = 400
RELATIVE_SLACK = 1e-6


def _derivative(candidate: Callable, u: np.ndarray) -> np.ndarray:
    step = 1e-7 * np.maximum(1.0, np.abs(u))
    step = np.minimum(step, 0.5 * np.minimum(u, 1.0 - u))
    return (np.asarray(candidate(u + step)) - np.asarray(candidate(u - step))) / (2.0 * step)


def check_comparison(
    candidate: Callable,
    sol: ReducedSolution,
    window: tuple[float, float],
    kind: Literal["lower", "upper"],
    cs: CoefficientSet,
) -> bool:
    """
    Check a candidate against a solution on a window of (0, 1).

    Args:
        candidate: Vectorized function of u, positive on the window
        sol: Solution of the reduced equation at speed sol.c
        window: (u_a, u_b) with 0 < u_a < u_b < 1
        kind: "lower" or "upper"
        cs: Coefficient set the solution was computed for

    Returns:
        True when the differential inequality and the anchor hold on the
        sampled window and the candidate dominates z there
    """
    u_a, u_b = window
    if not 0.0 < u_a < u_b < 1.0:
        raise ValueError("window must satisfy 0 < u_a < u_b < 1")
    u = np.geomspace(u_a, u_b, CHECK_POINTS)
    y = np.asarray(candidate(u), dtype=float)
    if np.any(y <= 0.0):
        logger.debug("Candidate is not positive on [%g, %g]", u_a, u_b)
        return False

    with np.errstate(divide="ignore", invalid="ignore"):
        rhs = cs.drift(sol.c, u) - cs.h(u) / np.power(y, cs.q)
    slope = _derivative(candidate, u)
    slack = RELATIVE_SLACK * np.maximum(1.0, np.abs(rhs))
    if kind == "lower":
        differential = np.all(slope <= rhs + slack)
    else:
        differential = np.all(slope >= rhs - slack)
    if not differential:
        logger.debug("Candidate is not a %s-solution on [%g, %g]", kind, u_a, u_b)
        return False

    z = sol.z_at(u)
    anchor = -1 if kind == "lower" else 0
    vanishes_at_one = kind == "lower" and abs(float(np.asarray(candidate(np.array([1.0])))[0])) < 1e-14
    if not vanishes_at_one and y[anchor] < z[anchor] * (1.0 - RELATIVE_SLACK):
        logger.debug("Candidate is below z at the anchor u=%g", u[anchor])
        return False
    return bool(np.all(y >= z * (1.0 - RELATIVE_SLACK)))


def power_barrier(coefficient: float, lam: float, p: float) -> Callable:
    """k (1-u)^sigma with sigma = (lambda+1)(p-1)/p, the local shape of z near 1 when h ~ c (1-u)^lambda."""
    sigma = (lam + 1.0) * (p - 1.0) / p

    def barrier(u):
        return coefficient * np.power(np.maximum(1.0 - np.asarray(u, dtype=float), 0.0), sigma)

    return barrier


def diffusion_barrier(cs: CoefficientSet, scale: float) -> Callable:
    """scale * d(u)."""

    def barrier(u):
        return scale * np.asarray(cs.d(u), dtype=float)

    return barrier
