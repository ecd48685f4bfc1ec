"""
Profile-level checks: residual of the second-order equation in flux form

    (d(u)|u'|^(p-1))' - (c g(u) - f(u)) u' - rho(u) = 0,

monotonicity, vanishing flux at the extreme samples and the limits u -> 1, 0.
"""
import logging

import numpy as np
from pydantic import BaseModel, Field

from engine.coefficients.model import CoefficientSet
from engine.profile.reconstruct import WaveProfile
from engine.wavespeed.bounds import necessary_condition
from shared.config import settings

logger = logging.getLogger(__name__)

MIN_SAMPLES = 64
BOUNDARY_TOL = 1e-3
# Central five-point weights for the first derivative
_STENCIL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0


class ProfileCheck(BaseModel):
    name: str
    passed: bool
    value: float | None = Field(default=None, description="Measured deviation")
    threshold: float | None = None
    detail: str = ""


class VerificationReport(BaseModel):
    c: float
    interior_samples: int
    checks: list[ProfileCheck]

    @property
    def all_passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def check(self, name: str) -> ProfileCheck:
        return next(check for check in self.checks if check.name == name)


def _uniform_interior(t: np.ndarray, span: tuple[float, float], step: float) -> np.ndarray:
    """Indices whose two neighbours on each side lie in span at uniform spacing."""
    inside = (t >= span[0] - 1e-12) & (t <= span[1] + 1e-12)
    n = t.size
    good = np.zeros(n, dtype=bool)
    if n < 5:
        return np.nonzero(good)[0]
    gaps = np.abs(np.diff(t) - step) <= 1e-9 * max(1.0, step)
    for i in range(2, n - 2):
        good[i] = bool(inside[i - 2:i + 3].all() and gaps[i - 2:i + 2].all())
    return np.nonzero(good)[0]


def _derivative(values: np.ndarray, index: np.ndarray, step: float) -> np.ndarray:
    window = np.stack([values[index + k] for k in range(-2, 3)], axis=1)
    return window @ _STENCIL / step


def flux_residual(profile: WaveProfile, cs: CoefficientSet, c: float) -> tuple[np.ndarray, np.ndarray]:
    """
    Residual of the flux-form equation at the interior samples of the integrated range.

    u' and the flux derivative are both five-point finite differences, so a
    corrupted sample shows up in its neighbourhood.

    Returns:
        (t, residual) at the points where the stencil fits twice
    """
    step = settings.profile_step
    first = _uniform_interior(profile.t, profile.integrated, step)
    du = np.full(profile.t.shape, np.nan)
    du[first] = _derivative(profile.u, first, step)
    flux = cs.d(profile.u) * np.power(np.abs(du), cs.p - 1.0)
    second = np.array([i for i in first if np.all(np.isfinite(flux[i - 2:i + 3]))], dtype=int)
    if second.size == 0:
        return np.empty(0), np.empty(0)
    u = profile.u[second]
    residual = _derivative(flux, second, step) - cs.drift(c, u) * du[second] - cs.rho(u)
    return profile.t[second], residual


def verify_profile(profile: WaveProfile, cs: CoefficientSet, c: float) -> VerificationReport:
    """
    Check a reconstructed profile against the wave equation.

    Args:
        profile: Reconstructed profile
        cs: Coefficient set
        c: Wave speed the profile was built for

    Returns:
        VerificationReport with named checks (never raises on a failed check)
    """
    checks: list[ProfileCheck] = []
    t_res, residual = flux_residual(profile, cs, c)
    interior = int(residual.size)
    checks.append(ProfileCheck(
        name="sample_count", passed=interior >= MIN_SAMPLES, value=float(interior), threshold=float(MIN_SAMPLES),
    ))

    rho_max = float(np.max(cs.rho(np.linspace(0.0, 1.0, 1025))))
    if interior:
        worst = int(np.argmax(np.abs(residual)))
        relative = float(abs(residual[worst]) / rho_max)
        checks.append(ProfileCheck(
            name="residual", passed=relative <= settings.residual_threshold,
            value=relative, threshold=settings.residual_threshold, detail=f"largest at t={t_res[worst]:.6g}",
        ))
    else:
        checks.append(ProfileCheck(name="residual", passed=False, detail="no interior samples"))

    rises = np.nonzero(np.diff(profile.u) >= 0.0)[0]
    checks.append(ProfileCheck(
        name="monotone", passed=rises.size == 0, value=float(rises.size), threshold=0.0,
        detail="" if rises.size == 0 else f"first at t={profile.t[rises[0]]:.6g}",
    ))

    edge_flux = float(max(abs(profile.flux[0]), abs(profile.flux[-1])))
    checks.append(ProfileCheck(
        name="flux_limits", passed=edge_flux <= settings.flux_threshold,
        value=edge_flux, threshold=settings.flux_threshold,
    ))

    distance = float(max(1.0 - profile.u[0], profile.u[-1]))
    checks.append(ProfileCheck(
        name="boundary_values", passed=distance <= BOUNDARY_TOL, value=distance, threshold=BOUNDARY_TOL,
        detail=f"u from {profile.u[0]:.6g} to {profile.u[-1]:.6g}",
    ))

    checks.append(ProfileCheck(name="necessary_condition", passed=necessary_condition(cs, c)))

    report = VerificationReport(c=c, interior_samples=interior, checks=checks)
    failed = [check.name for check in checks if not check.passed]
    if failed:
        logger.warning("Profile at c=%.6g failed checks: %s", c, ", ".join(failed))
    return report
