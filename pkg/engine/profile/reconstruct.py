"""
Wave profile u(t) from a reduced solution, through the Cauchy problem

    u' = -(z(u)/d(u))^(1/(p-1)),    u(0) = 1/2.

The sampled range of z is integrated with DOP853 on a uniform time grid.
Beyond it the profile follows the local power model of (d/z)^(1/(p-1)),
which is integrated in closed form and ends at the quadrature value of
alpha or beta when that time is finite.
"""
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.integrate import solve_ivp

from engine.coefficients.model import CoefficientSet, EndpointLimits
from engine.errors import InconsistentEndpoint, StepFailure, UndecidableTail
from engine.profile.quadrature import (
    TailExponent,
    tail_constant,
    tail_exponent_at_one,
    tail_exponent_at_zero,
    time_to_one,
    time_to_zero,
)
from engine.reduced.solution import ReducedSolution
from shared.config import settings

logger = logging.getLogger(__name__)

ODE_RTOL = 1e-11
ODE_ATOL = 1e-14
# Relative slack between the integrated arrival and the quadrature arrival time
ENDPOINT_SLACK = 1e-3


class WaveProfile(BaseModel):
    """Samples of a travelling wave, ordered by t with u strictly decreasing."""

    model_config = ConfigDict(arbitrary_types_allowed=True, ser_json_inf_nan="constants")

    c: float
    p: float
    t: np.ndarray
    u: np.ndarray
    du_dt: np.ndarray
    flux: np.ndarray
    alpha: float | None = None
    beta: float | None = None
    integrated: tuple[float, float]

    @property
    def reaches_zero(self) -> bool:
        return self.beta is not None and math.isfinite(self.beta) and self.u[-1] == 0.0

    @property
    def reaches_one(self) -> bool:
        return self.alpha is not None and math.isfinite(self.alpha) and self.u[0] == 1.0

    @property
    def slope_at_beta(self) -> float | None:
        """u'(beta-) when the profile reaches 0 inside the window."""
        return float(self.du_dt[-1]) if self.reaches_zero else None

    @property
    def slope_at_alpha(self) -> float | None:
        return float(self.du_dt[0]) if self.reaches_one else None

    def time_at(self, level: float) -> float:
        """Time at which u crosses level, by linear interpolation."""
        if not self.u[-1] <= level <= self.u[0]:
            raise ValueError(f"u = {level:g} is outside the sampled range [{self.u[-1]:.3g}, {self.u[0]:.3g}]")
        return float(np.interp(level, self.u[::-1], self.t[::-1]))

    def shifted(self, dt: float) -> "WaveProfile":
        """The same wave translated in time by dt."""
        return self.model_copy(update={
            "t": self.t + dt,
            "alpha": None if self.alpha is None else self.alpha + dt,
            "beta": None if self.beta is None else self.beta + dt,
            "integrated": (self.integrated[0] + dt, self.integrated[1] + dt),
        })

    def reanchored(self, level: float) -> "WaveProfile":
        """Translate so that u(0) = level."""
        return self.shifted(-self.time_at(level))

    def table(self) -> dict[str, np.ndarray]:
        return {"t": self.t, "u": self.u, "du_dt": self.du_dt, "flux": self.flux}

    def summary(self) -> dict:
        return {
            "c": self.c,
            "samples": int(self.t.size),
            "t_range": [float(self.t[0]), float(self.t[-1])],
            "alpha": "undecided" if self.alpha is None else self.alpha,
            "beta": "undecided" if self.beta is None else self.beta,
            "slope_at_alpha": self.slope_at_alpha,
            "slope_at_beta": self.slope_at_beta,
        }


def _grid(t_end: float, step: float) -> np.ndarray:
    """0, +-step, +-2 step, ... up to t_end inclusive."""
    n = int(math.floor(abs(t_end) / step + 1e-9))
    grid = np.arange(n + 1) * step * math.copysign(1.0, t_end) if t_end else np.zeros(1)
    if abs(t_end) - abs(grid[-1]) > 1e-9 * step:
        grid = np.append(grid, t_end)
    return grid


def _integrate(sol: ReducedSolution, cs: CoefficientSet, t_end: float, step: float, stop_at: float):
    """Run the Cauchy problem from (0, 1/2) toward t_end until u reaches stop_at."""
    u_low, u_high = sol.u_floor, sol.u_start

    def rhs(t, y):
        u = min(max(y[0], u_low), u_high)
        return [-np.power(float(sol.z_at(u)) / float(cs.d(u)), cs.q)]

    def arrival(t, y):
        return y[0] - stop_at

    arrival.terminal = True
    grid = _grid(t_end, step)
    if grid.size < 2:
        return grid, np.array([0.5]), None
    result = solve_ivp(
        rhs, (0.0, float(grid[-1])), [0.5], method="DOP853",
        t_eval=grid, events=arrival, rtol=ODE_RTOL, atol=ODE_ATOL,
    )
    if result.status == -1:
        raise StepFailure(f"profile integration toward t={t_end:g} failed: {result.message}")
    events = result.t_events[0]
    t_hit = float(events[0]) if events.size else None
    return result.t, result.y[0], t_hit


def _tail_toward_zero(times: np.ndarray, t_f: float, u_f: float, constant: float, gamma: float) -> np.ndarray:
    """u after the floor: t - t_f = C int_u^u_f v^gamma dv."""
    dt = times - t_f
    if gamma == -1.0:
        return u_f * np.exp(-dt / constant)
    base = u_f ** (gamma + 1.0) - (gamma + 1.0) * dt / constant
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(base > 0.0, np.power(np.maximum(base, 0.0), 1.0 / (gamma + 1.0)), 0.0)


def _tail_toward_one(times: np.ndarray, t_s: float, s_s: float, constant: float, gamma: float) -> np.ndarray:
    """1 - u before the start: t_s - t = C int_s^s_s v^gamma dv."""
    dt = times - t_s
    if gamma == -1.0:
        return s_s * np.exp(dt / constant)
    base = s_s ** (gamma + 1.0) + (gamma + 1.0) * dt / constant
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(base > 0.0, np.power(np.maximum(base, 0.0), 1.0 / (gamma + 1.0)), 0.0)


def _limit_slope(constant: float, gamma: float) -> float:
    """lim u' at an endpoint reached in finite time, from |u'| = dist^-gamma / C."""
    if gamma < 0.0:
        return 0.0
    if gamma == 0.0:
        return -1.0 / constant
    return -math.inf


def _try(fn, *args):
    try:
        return fn(*args)
    except UndecidableTail as exc:
        logger.info("%s left undecided: %s", fn.__name__, exc)
        return None


def _check_arrival(t_hit: float | None, t_end: float, predicted: float | None, side: str) -> None:
    if predicted is None or not math.isfinite(predicted):
        return
    slack = ENDPOINT_SLACK * max(1.0, abs(predicted))
    if t_hit is not None and abs(t_hit) > abs(predicted) + slack:
        raise InconsistentEndpoint(
            f"profile reached the {side} edge of the sampled range at t={t_hit:.6g}, "
            f"after the predicted arrival {predicted:.6g}"
        )
    if t_hit is None and abs(t_end) > abs(predicted) + slack:
        raise InconsistentEndpoint(f"profile stalled before the predicted arrival {predicted:.6g} at the {side} end")


def reconstruct(
    sol: ReducedSolution,
    cs: CoefficientSet,
    t_window: tuple[float, float],
    limits: EndpointLimits | None = None,
) -> WaveProfile:
    """
    Reconstruct the wave profile on a time window.

    Args:
        sol: Reduced solution at speed c, from near 1 down to its floor
        cs: Coefficient set
        t_window: (t_min, t_max), must contain the anchor t = 0
        limits: Precomputed endpoint limits

    Returns:
        WaveProfile with u strictly decreasing; alpha/beta are None when
        the tail exponent could not be decided

    Raises:
        ValueError: If t_window does not contain 0
        InconsistentEndpoint: If the integration overshoots or stalls before a finite arrival time
    """
    t_min, t_max = t_window
    if not (t_min <= 0.0 <= t_max and t_min < t_max):
        raise ValueError(f"time window [{t_min:g}, {t_max:g}] must contain the anchor t = 0")
    step = settings.profile_step

    beta = _try(time_to_zero, sol, cs, limits)
    alpha = _try(time_to_one, sol, cs)
    tail_0: TailExponent | None = _try(tail_exponent_at_zero, sol, cs, limits)
    tail_1: TailExponent | None = _try(tail_exponent_at_one, sol, cs)

    t_fwd, u_fwd, t_f = _integrate(sol, cs, t_max, step, sol.u_floor)
    t_bwd, u_bwd, t_s = _integrate(sol, cs, t_min, step, sol.u_start)
    _check_arrival(t_f, t_max, beta, "lower")
    _check_arrival(t_s, t_min, alpha, "upper")

    t = np.concatenate([t_bwd[:0:-1], t_fwd])
    u = np.concatenate([u_bwd[:0:-1], u_fwd])
    du_dt = -np.power(sol.z_at(u) / cs.d(u), cs.q)
    integrated = (float(t[0]), float(t[-1]))

    head = tail = None
    if t_f is not None and tail_0 is not None:
        constant = tail_constant(sol, cs, sol.u_floor, sol.u_floor, tail_0.exponent)
        grid = _grid(t_max, step)
        times = grid[grid > t[-1] + 1e-12]
        if beta is not None and math.isfinite(beta):
            times = times[times < beta]
        u_tail = _tail_toward_zero(times, t_f, sol.u_floor, constant, tail_0.exponent)
        keep = (u_tail > 0.0) & (u_tail < u[-1])
        times, u_tail = times[keep], u_tail[keep]
        slope = -np.power(u_tail, -tail_0.exponent) / constant
        if beta is not None and math.isfinite(beta) and beta <= t_max and beta > (times[-1] if times.size else t[-1]):
            times = np.append(times, beta)
            u_tail = np.append(u_tail, 0.0)
            slope = np.append(slope, _limit_slope(constant, tail_0.exponent))
        tail = (times, u_tail, slope)

    if t_s is not None and tail_1 is not None:
        s_start = 1.0 - sol.u_start
        constant = tail_constant(sol, cs, sol.u_start, s_start, tail_1.exponent)
        grid = _grid(t_min, step)
        times = grid[grid < t[0] - 1e-12][::-1]
        if alpha is not None and math.isfinite(alpha):
            times = times[times > alpha]
        s_tail = _tail_toward_one(times, t_s, s_start, constant, tail_1.exponent)
        keep = (s_tail > 0.0) & (1.0 - s_tail > u[0])
        times, s_tail = times[keep], s_tail[keep]
        slope = -np.power(s_tail, -tail_1.exponent) / constant
        u_head = 1.0 - s_tail
        if alpha is not None and math.isfinite(alpha) and alpha >= t_min and alpha < (times[0] if times.size else t[0]):
            times = np.insert(times, 0, alpha)
            u_head = np.insert(u_head, 0, 1.0)
            slope = np.insert(slope, 0, _limit_slope(constant, tail_1.exponent))
        head = (times, u_head, slope)

    if head is not None:
        t = np.concatenate([head[0], t])
        u = np.concatenate([head[1], u])
        du_dt = np.concatenate([head[2], du_dt])
    if tail is not None:
        t = np.concatenate([t, tail[0]])
        u = np.concatenate([u, tail[1]])
        du_dt = np.concatenate([du_dt, tail[2]])

    flux = np.zeros_like(u)
    inner = (u > 0.0) & (u < 1.0)
    flux[inner] = cs.d(u[inner]) * np.power(np.abs(du_dt[inner]), cs.p - 1.0)

    profile = WaveProfile(
        c=sol.c, p=cs.p, t=t, u=u, du_dt=du_dt, flux=flux,
        alpha=alpha, beta=beta, integrated=integrated,
    )
    logger.info(
        "Profile at c=%.6g: %d samples on [%.4g, %.4g], alpha=%s, beta=%s",
        sol.c, t.size, t[0], t[-1], alpha, beta,
    )
    return profile
