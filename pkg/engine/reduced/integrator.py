"""
Integration of the reduced equation z' = c g - f - h / z^(1/(p-1)).

Backward shots start next to u = 1 and run toward u = 0. On [1/2, 1) the
unknown is w = z^(p/(p-1)), whose equation w' = p'(A w^(1/p) - h) has a
bounded right-hand side. On (0, 1/2] the unknown is y = log(z/u) in the
variable s = -log u:
    dy/ds = 1 - A e^-y + h u^(-1/(p-1)) e^-(1 + 1/(p-1)) y
which turns the approach to the origin into a long but regular run and
makes the terminal ratio z/u directly observable.
"""
import logging
import math
import time
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import integrate, optimize

from engine.coefficients.limits import endpoint_limits
from engine.coefficients.model import CoefficientSet, EndpointLimits
from engine.errors import InfiniteH0, NoAsymptotics, StepFailure
from engine.monitoring.logging import log_shot
from engine.reduced.eta import SlopeFlag, eta0_roots, eta1_root
from engine.reduced.solution import (
    Branch,
    BranchKind,
    ReducedSolution,
    ShotOutcome,
    TailModel,
    sample_grid,
)
from shared.config import settings

logger = logging.getLogger(__name__)

SPLIT = 0.5
# Relative slack on z/u above the largest eta0 root before a shot counts as missing the origin
RATIO_SLACK = 1e-3


class StartupSeed(BaseModel):
    """First point of a backward shot and the local model it came from."""

    model_config = ConfigDict(frozen=True)

    u: float
    z: float
    kind: Literal["linear", "implicit", "power"]
    tail: TailModel | None = None


def startup_at_one(c: float, cs: CoefficientSet, limits: EndpointLimits | None = None, eps: float | None = None) -> StartupSeed:
    """
    Seed (1 - eps, z) for a backward shot.

    The local behaviour at 1 is linear with slope from eta1 when h1 is
    finite and positive, an implicit Euler substep when that slope is 0, and
    the power ansatz K (1-u)^sigma, sigma = (lambda+1)(p-1)/p, when h1 is
    infinite and h ~ c1 (1-u)^lambda.

    Raises:
        NoAsymptotics: If h1 is infinite without power-law descriptors at 1
    """
    eps = settings.startup_eps if eps is None else eps
    if not 0.0 < eps <= 1e-3:
        raise ValueError("eps must lie in (0, 1e-3]")
    limits = limits or endpoint_limits(cs)
    u0 = 1.0 - eps
    h1 = limits.ell1
    if not h1.known:
        raise NoAsymptotics("limit of h/(1-u)^(1/(p-1)) at 1 is undecided; supply power-law descriptors at 1")

    if h1.is_infinite:
        analytic = cs.h_exponent(1)
        if analytic is None:
            raise NoAsymptotics("h/(1-u)^(1/(p-1)) is unbounded at 1 and no power-law descriptors were given")
        c1, lam = analytic
        if not -1.0 < lam <= cs.q:
            raise NoAsymptotics(f"exponent {lam:g} of h at 1 is outside (-1, 1/(p-1)]")
        sigma = (lam + 1.0) * (cs.p - 1.0) / cs.p
        coefficient = (c1 / sigma) ** ((cs.p - 1.0) / cs.p)
        return StartupSeed(u=u0, z=coefficient * eps**sigma, kind="power", tail=TailModel(coefficient=coefficient, exponent=sigma))

    r1 = eta1_root(c, float(cs.g(1.0)), float(cs.f(1.0)), h1.value, cs.p)
    if r1 != SlopeFlag.NONDIFFERENTIABLE and r1 > 0.0:
        return StartupSeed(u=u0, z=r1 * eps, kind="linear", tail=TailModel(coefficient=r1, exponent=1.0))

    # Zero slope at 1: one implicit Euler step backward from z(1) = 0
    drift = float(cs.drift(c, u0))
    h = float(cs.h(u0))
    q = cs.q

    def residual(z: float) -> float:
        return z ** (1.0 + q) + eps * drift * z**q - eps * h

    high = max(eps, 1e-300)
    while residual(high) <= 0.0:
        high *= 2.0
    z0 = optimize.brentq(residual, 0.0, high, xtol=1e-300, rtol=1e-14)
    return StartupSeed(u=u0, z=z0, kind="implicit")


def _power_rhs(c: float, cs: CoefficientSet):
    p_conj, p = cs.p_conjugate, cs.p

    def rhs(u, w):
        ww = max(w[0], 0.0)
        return [p_conj * (float(cs.drift(c, u)) * ww ** (1.0 / p) - float(cs.h(u)))]

    return rhs


def _ratio_rhs(c: float, cs: CoefficientSet):
    q = cs.q

    def rhs(s, y):
        u = math.exp(-s)
        return [1.0 - float(cs.drift(c, u)) * math.exp(-y[0]) + float(cs.h(u)) * u ** (-q) * math.exp(-(1.0 + q) * y[0])]

    return rhs


def _solve(rhs, span, y0, events=None, atol=None):
    sol = integrate.solve_ivp(
        rhs,
        span,
        [y0],
        method="Radau",
        rtol=settings.ode_rtol,
        atol=settings.ode_atol if atol is None else atol,
        dense_output=True,
        events=events,
    )
    if sol.status == -1:
        raise StepFailure(sol.message)
    return sol


def _aitken(values: np.ndarray) -> float:
    t0, t1, t2 = values
    denominator = (t2 - t1) - (t1 - t0)
    if denominator == 0.0 or not np.isfinite(denominator):
        return float(t2)
    estimate = t2 - (t2 - t1) ** 2 / denominator
    # Accept only if the estimate stays between the last sample and its trend
    if not np.isfinite(estimate) or abs(estimate - t2) > abs(t2 - t0) + 1e-300:
        return float(t2)
    return float(max(estimate, 0.0))


def _backward(c: float, cs: CoefficientSet, start: tuple[float, float], limits: EndpointLimits, u_floor: float) -> ReducedSolution:
    u0, z0 = start
    if limits.ell0.is_infinite:
        raise InfiniteH0("h/u^(1/(p-1)) is unbounded at 0")
    roots = eta0_roots(c, float(cs.g(0.0)), float(cs.f(0.0)), limits.ell0.value, cs.p)
    bound = cs.drift_bound(c)
    ratio_cap = max(bound, roots.r0_plus or 0.0) * (1.0 + 1e-6) + 1e-12
    branches: list[Branch] = []
    touchdown = None
    u_split = min(SPLIT, u0)

    if u0 > SPLIT:
        w0 = z0**cs.p_conjugate
        sol = _solve(_power_rhs(c, cs), (u0, SPLIT), w0, atol=min(settings.ode_atol, 1e-3 * w0))
        branches.append(Branch(BranchKind.POWER, SPLIT, u0, sol.sol, cs.p))
        z_split = max(float(sol.y[0, -1]), 0.0) ** (1.0 / cs.p_conjugate)
    else:
        z_split = z0

    s_start, s_end = -math.log(u_split), -math.log(u_floor)
    y_start = math.log(max(z_split / u_split, 1e-300))
    cap = math.log(ratio_cap)

    def leaves_cone(s, y):
        return y[0] - cap

    leaves_cone.terminal = True
    leaves_cone.direction = 1

    sol = _solve(_ratio_rhs(c, cs), (s_start, s_end), y_start, events=leaves_cone)
    s_stop = float(sol.t[-1])
    u_stop = math.exp(-s_stop)
    branches.append(Branch(BranchKind.RATIO, u_stop, u_split, sol.sol, cs.p))

    ratios = np.exp(sol.sol(s_stop - np.log(2.0) * np.array([2.0, 1.0, 0.0]))[0])
    terminal_ratio = _aitken(ratios)
    if sol.status == 1:
        outcome = ShotOutcome.MISSED_ORIGIN
        touchdown = u_stop
    elif not roots.exist or terminal_ratio > roots.r0_plus * (1.0 + RATIO_SLACK) + 1e-9:
        outcome = ShotOutcome.MISSED_ORIGIN
        touchdown = u_stop
    else:
        outcome = ShotOutcome.REACHED_ORIGIN

    grid = sample_grid(u_stop, u0, settings.samples_per_decade)
    solution = ReducedSolution(
        c=c, p=cs.p, direction="toward-0", outcome=outcome, u=grid, z=np.empty_like(grid),
        touchdown=touchdown, terminal_ratio=terminal_ratio, branches=branches,
    )
    return solution.resampled(branches, settings.samples_per_decade)


def z_floor(c: float, cs: CoefficientSet) -> float:
    """Value of z below which a forward run counts as touching down."""
    return settings.z_floor_factor * max(1.0, cs.drift_bound(c))


def _forward(c: float, cs: CoefficientSet, start: tuple[float, float], eps: float) -> ReducedSolution:
    u0, z0 = start
    u_end = 1.0 - eps
    w0 = z0**cs.p_conjugate
    w_floor = z_floor(c, cs) ** cs.p_conjugate

    def vanishes(u, w):
        return w[0] - w_floor

    vanishes.terminal = True
    vanishes.direction = -1

    sol = _solve(_power_rhs(c, cs), (u0, u_end), w0, events=vanishes, atol=min(settings.ode_atol, 1e-3 * w0))
    u_stop = float(sol.t[-1])
    touched = sol.status == 1
    branches = [Branch(BranchKind.POWER, u0, u_stop, sol.sol, cs.p)]
    grid = sample_grid(u0, u_stop, settings.samples_per_decade)
    solution = ReducedSolution(
        c=c, p=cs.p, direction="toward-1",
        outcome=ShotOutcome.TOUCHDOWN if touched else ShotOutcome.REACHED_ONE,
        u=grid, z=np.empty_like(grid), touchdown=u_stop if touched else None, branches=branches,
    )
    return solution.resampled(branches, settings.samples_per_decade)


def integrate_reduced(
    c: float,
    cs: CoefficientSet,
    start: tuple[float, float] | StartupSeed,
    direction: Literal["toward-0", "toward-1"] = "toward-0",
    limits: EndpointLimits | None = None,
    u_floor: float | None = None,
) -> ReducedSolution:
    """
    Integrate the reduced equation from a start point.

    Args:
        c: Speed
        cs: Coefficient set
        start: (u, z) with z > 0, or a seed from startup_at_one
        direction: "toward-0" for backward shots, "toward-1" for forward ones
        limits: Precomputed endpoint limits
        u_floor: Where backward shots stop (default from settings)

    Returns:
        Sampled solution; backward shots report whether they reached the
        origin, forward shots report an interior touchdown if z vanishes

    Raises:
        StepFailure: If the integrator cannot advance
        InfiniteH0: If a backward shot is requested while ell0 is infinite
        BoundViolation: If the samples break z' < c g - f, or z <= M u on
            a shot that reached the origin
    """
    tail = None
    if isinstance(start, StartupSeed):
        tail = start.tail
        start = (start.u, start.z)
    u0, z0 = start
    if not (0.0 < u0 < 1.0 and z0 > 0.0):
        raise ValueError("start must satisfy 0 < u < 1 and z > 0")
    began = time.perf_counter()
    if direction == "toward-0":
        limits = limits or endpoint_limits(cs)
        solution = _backward(c, cs, (u0, z0), limits, u_floor or settings.u_floor)
        if tail is not None:
            solution = solution.model_copy(update={"tail_at_one": tail})
    else:
        solution = _forward(c, cs, (u0, z0), settings.startup_eps)
    solution.check_bounds(cs)
    log_shot(c, solution.outcome.value, solution.terminal_ratio, (time.perf_counter() - began) * 1000.0)
    return solution


def shoot(c: float, cs: CoefficientSet, limits: EndpointLimits | None = None) -> ReducedSolution:
    """Backward shot at speed c from the standard seed next to u = 1."""
    limits = limits or endpoint_limits(cs)
    return integrate_reduced(c, cs, startup_at_one(c, cs, limits), "toward-0", limits)


def integrate_from_origin(c: float, cs: CoefficientSet, slope: float, u_floor: float | None = None) -> Branch:
    """
    Ratio branch on [u_floor, 1/2] leaving the origin along z = slope * u.

    Integrating toward larger u attracts trajectories to the invariant
    curve tangent to the largest eta0 root, so this recovers the critical
    solution near 0 where backward shots drift away from it.
    """
    if slope <= 0.0:
        raise ValueError("origin slope must be positive to follow the critical branch")
    u_floor = u_floor or settings.u_floor
    sol = _solve(_ratio_rhs(c, cs), (-math.log(u_floor), -math.log(SPLIT)), math.log(slope))
    return Branch(BranchKind.RATIO, u_floor, SPLIT, sol.sol, cs.p)
