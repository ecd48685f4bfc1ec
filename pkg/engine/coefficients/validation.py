"""
Standing hypotheses on the coefficients, checked on a clustered grid.
"""
import logging

import numpy as np
from pydantic import BaseModel, Field
from scipy import integrate

from engine.coefficients.limits import power_fit
from engine.coefficients.model import CoefficientSet
from engine.errors import DomainError, FitFailed
from shared.config import settings

logger = logging.getLogger(__name__)

MIN_GRID = 16

# Gauss-Legendre rule used for running integrals from 0
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)


class HypothesisCheck(BaseModel):
    name: str
    passed: bool
    first_violation: float | None = Field(default=None, description="Smallest grid point where the check fails")
    detail: str = ""


class ValidationReport(BaseModel):
    grid_size: int
    checks: list[HypothesisCheck]

    @property
    def all_passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def check(self, name: str) -> HypothesisCheck:
        return next(check for check in self.checks if check.name == name)


def lobatto_grid(n: int) -> np.ndarray:
    """
    Interior Chebyshev-Lobatto points of (0, 1), clustered at both ends.

    The grid for 2n contains the grid for n, so a point that fails on the
    coarse grid is still checked on the fine one.
    """
    j = np.arange(1, n)
    return 0.5 * (1.0 - np.cos(np.pi * j / n))


def running_integral(fn, u: np.ndarray) -> np.ndarray:
    """int_0^u fn for every point of u, each by its own Gauss-Legendre rule."""
    u = np.asarray(u, dtype=float)
    nodes = 0.5 * u[:, None] * (_GL_NODES[None, :] + 1.0)
    values = np.asarray(fn(nodes), dtype=float)
    return 0.5 * u * (values @ _GL_WEIGHTS)


def _first(points: np.ndarray, bad: np.ndarray) -> float | None:
    return float(points[bad][0]) if np.any(bad) else None


def _safe(fn, u):
    try:
        return np.asarray(fn(u), dtype=float)
    except DomainError:
        return np.full(np.shape(u), np.nan)


def _check_rho(cs: CoefficientSet, u: np.ndarray, tol: float) -> HypothesisCheck:
    ends = _safe(cs.rho, np.array([0.0, 1.0]))
    if not np.all(np.isfinite(ends)) or np.any(np.abs(ends) > tol):
        where = 0.0 if not (np.isfinite(ends[0]) and abs(ends[0]) <= tol) else 1.0
        return HypothesisCheck(name="rho", passed=False, first_violation=where, detail="rho must vanish at 0 and 1")
    values = _safe(cs.rho, u)
    bad = ~(values > 0)
    if np.any(bad):
        return HypothesisCheck(name="rho", passed=False, first_violation=_first(u, bad), detail="rho must be positive on (0,1)")
    return HypothesisCheck(name="rho", passed=True)


def _check_g(cs: CoefficientSet, u: np.ndarray) -> HypothesisCheck:
    g0 = _safe(cs.g, np.array(0.0))
    if not (np.isfinite(g0) and g0 > 0):
        return HypothesisCheck(name="g", passed=False, first_violation=0.0, detail="g(0) must be positive")
    try:
        means = running_integral(cs.g, u)
    except DomainError as exc:
        return HypothesisCheck(name="g", passed=False, detail=str(exc))
    bad = ~(means > 0)
    if np.any(bad):
        return HypothesisCheck(name="g", passed=False, first_violation=_first(u, bad), detail="int_0^u g must be positive")
    return HypothesisCheck(name="g", passed=True)


def _h_integrable_at(cs: CoefficientSet, endpoint: int, margin: float) -> str | None:
    try:
        fit = power_fit(cs.h, endpoint)
    except FitFailed as exc:
        return str(exc)
    if fit.exponent <= -1.0 + (0.0 if fit.exact else margin):
        return f"d^(1/(p-1))*rho behaves like dist^{fit.exponent:.4g} at u={endpoint}"
    return None


def _check_d(cs: CoefficientSet, u: np.ndarray) -> HypothesisCheck:
    values = _safe(cs.d, u)
    bad = ~(values > 0)
    if np.any(bad):
        return HypothesisCheck(name="d", passed=False, first_violation=_first(u, bad), detail="d must be positive on (0,1)")
    margin = settings.exponent_margin
    for endpoint in (0, 1):
        analytic = cs.h_exponent(endpoint)
        if analytic is not None:
            if analytic[1] <= -1.0:
                return HypothesisCheck(
                    name="d", passed=False, first_violation=float(endpoint),
                    detail=f"d^(1/(p-1))*rho behaves like dist^{analytic[1]:.4g} at u={endpoint}",
                )
            continue
        problem = _h_integrable_at(cs, endpoint, margin)
        if problem:
            return HypothesisCheck(name="d", passed=False, first_violation=float(endpoint), detail=problem)
    total, _ = integrate.quad(lambda x: float(cs.h(x)), 0.0, 1.0, limit=200)
    if not np.isfinite(total):
        return HypothesisCheck(name="d", passed=False, detail="d^(1/(p-1))*rho is not integrable on (0,1)")
    return HypothesisCheck(name="d", passed=True)


def validate_hypotheses(cs: CoefficientSet, grid_size: int | None = None, tol: float = 1e-12) -> ValidationReport:
    """
    Check the standing hypotheses on rho, g and d.

    Args:
        cs: Coefficient set
        grid_size: Number of Chebyshev-Lobatto intervals (default from settings)
        tol: Tolerance on rho(0) = rho(1) = 0

    Returns:
        Report with one entry per hypothesis and the first violating point

    Raises:
        ValueError: If grid_size is below MIN_GRID
    """
    n = grid_size or settings.hypothesis_grid
    if n < MIN_GRID:
        raise ValueError(f"grid_size must be at least {MIN_GRID}, got {n}")
    u = lobatto_grid(n)
    report = ValidationReport(grid_size=n, checks=[_check_rho(cs, u, tol), _check_g(cs, u), _check_d(cs, u)])
    for check in report.checks:
        if not check.passed:
            logger.warning("Hypothesis on %s fails: %s (u=%s)", check.name, check.detail, check.first_violation)
    return report
