"""
Sampled solutions of the reduced equation z' = c g - f - h / z^(1/(p-1)).

A solution is stored as dense ODE branches plus samples on a grid that is
geometric near both endpoints. Two branch representations are used:
    power: w = z^(p/(p-1)) as a function of u (bounded right-hand side)
    ratio: y = log(z/u) as a function of s = -log u (resolves u -> 0)
"""
import math
from enum import Enum
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from engine.coefficients.model import CoefficientSet
from engine.errors import BoundViolation

# Relative slack on the a priori bounds, above the slack of the cone exit event
BOUND_RTOL = 1e-5


class ShotOutcome(str, Enum):
    REACHED_ORIGIN = "reached-origin"
    MISSED_ORIGIN = "missed-origin"
    TOUCHDOWN = "touchdown"
    REACHED_ONE = "reached-one"


class BranchKind(str, Enum):
    POWER = "power"
    RATIO = "ratio"


class TailModel(BaseModel):
    """z ~ coefficient * dist^exponent beyond the sampled range."""

    model_config = ConfigDict(frozen=True)

    coefficient: float
    exponent: float


class Branch:
    """One dense piece of a solution, valid for u in [u_low, u_high]."""

    def __init__(self, kind: BranchKind, u_low: float, u_high: float, dense, p: float):
        self.kind = kind
        self.u_low = u_low
        self.u_high = u_high
        self.dense = dense
        self.p = p

    def covers(self, u: np.ndarray) -> np.ndarray:
        return (u >= self.u_low * (1 - 1e-14)) & (u <= self.u_high * (1 + 1e-14))

    def z(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.kind == BranchKind.POWER:
            w = np.asarray(self.dense(u))[0]
            return np.power(np.maximum(w, 0.0), (self.p - 1.0) / self.p)
        y = np.asarray(self.dense(-np.log(u)))[0]
        return np.exp(y) * u


def sample_grid(u_low: float, u_high: float, per_decade: int) -> np.ndarray:
    """Strictly decreasing points from u_high to u_low, geometric toward both ends."""
    pieces = []
    if u_high > 0.5:
        top = min(u_high, 1.0 - 1e-15)
        bottom = max(u_low, 0.5)
        n = max(2, math.ceil(math.log10((1.0 - bottom) / (1.0 - top)) * per_decade) + 1)
        pieces.append(1.0 - np.geomspace(1.0 - top, 1.0 - bottom, n))
    if u_low < 0.5:
        top = min(u_high, 0.5)
        n = max(2, math.ceil(math.log10(top / u_low) * per_decade) + 1)
        pieces.append(np.geomspace(top, u_low, n))
    u = np.unique(np.concatenate(pieces))
    return u[::-1]


class ReducedSolution(BaseModel):
    """
    A solution z(u) of the reduced equation at speed c.

    Samples are ordered with u strictly decreasing. For backward shots the
    outcome tells whether the trajectory reached the origin (z/u stayed at or
    below the largest root of eta0) or missed it; touchdown records where the
    shot left the admissible region.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    c: float
    p: float
    direction: Literal["toward-0", "toward-1"]
    outcome: ShotOutcome
    u: np.ndarray
    z: np.ndarray
    touchdown: float | None = None
    terminal_ratio: float | None = Field(default=None, description="Extrapolated z/u as u -> 0")
    tail_at_one: TailModel | None = None
    branches: list[Branch] = Field(default_factory=list, exclude=True, repr=False)

    @property
    def reached_origin(self) -> bool:
        return self.outcome == ShotOutcome.REACHED_ORIGIN

    @property
    def u_floor(self) -> float:
        return float(self.u[-1])

    @property
    def u_start(self) -> float:
        return float(self.u[0])

    def _tail_exponent(self, near_zero: bool) -> float:
        if near_zero:
            u1, u2, z1, z2 = self.u[-2], self.u[-1], self.z[-2], self.z[-1]
            return float(math.log(z1 / z2) / math.log(u1 / u2))
        s1, s2 = 1.0 - self.u[1], 1.0 - self.u[0]
        return float(math.log(self.z[1] / self.z[0]) / math.log(s1 / s2))

    def z_at(self, u) -> np.ndarray:
        """Evaluate z on arbitrary points, using tail models outside the sampled range."""
        points = np.atleast_1d(np.asarray(u, dtype=float))
        out = np.full(points.shape, np.nan)
        for branch in self.branches:
            mask = branch.covers(points) & np.isnan(out)
            if np.any(mask):
                out[mask] = branch.z(points[mask])
        below = np.isnan(out) & (points < self.u_floor)
        if np.any(below):
            m = self._tail_exponent(near_zero=True)
            out[below] = self.z[-1] * np.power(points[below] / self.u_floor, m)
        above = np.isnan(out) & (points > self.u_start)
        if np.any(above):
            dist = 1.0 - points[above]
            if self.tail_at_one is not None:
                out[above] = self.tail_at_one.coefficient * np.power(dist, self.tail_at_one.exponent)
            else:
                m = self._tail_exponent(near_zero=False)
                out[above] = self.z[0] * np.power(dist / (1.0 - self.u_start), m)
        missing = np.isnan(out)
        if np.any(missing):
            out[missing] = np.interp(points[missing], self.u[::-1], self.z[::-1])
        return out if np.ndim(u) else out[0]

    def slope(self, cs: CoefficientSet, u) -> np.ndarray:
        """z'(u) from the equation itself."""
        z = self.z_at(u)
        with np.errstate(divide="ignore", invalid="ignore"):
            return cs.drift(self.c, u) - cs.h(u) / np.power(z, cs.q)

    def check_bounds(self, cs: CoefficientSet, rtol: float = BOUND_RTOL) -> None:
        """
        Check the a priori bounds on the samples: z' < c g - f between
        neighbouring samples, and z <= M u with M = max |c g - f| when the
        solution runs into the origin.

        Raises:
            BoundViolation: If either bound fails by more than rtol * max(1, M)
        """
        bound = cs.drift_bound(self.c)
        slack = rtol * max(1.0, bound)
        drift = np.broadcast_to(np.asarray(cs.drift(self.c, self.u), dtype=float), self.u.shape)
        secant = np.diff(self.z) / np.diff(self.u)
        # Mean value theorem: the secant is z' somewhere inside the interval
        allowed = np.maximum(drift[:-1], drift[1:]) + np.abs(np.diff(drift)) + slack
        above = np.nonzero(secant > allowed)[0]
        if above.size:
            i = int(above[0])
            raise BoundViolation(
                f"z' = {secant[i]:.6g} exceeds c g - f = {drift[i]:.6g} on [{self.u[i + 1]:.6g}, {self.u[i]:.6g}]"
            )
        if not self.reached_origin:
            return
        ratio = self.z / self.u
        worst = int(np.argmax(ratio))
        if ratio[worst] > bound + slack:
            raise BoundViolation(f"z/u = {ratio[worst]:.6g} exceeds M = {bound:.6g} at u={self.u[worst]:.6g}")

    def table(self, cs: CoefficientSet) -> dict[str, np.ndarray]:
        return {"u": self.u, "z": self.z, "dz": self.slope(cs, self.u)}

    def resampled(self, branches: list[Branch], per_decade: int, **updates) -> "ReducedSolution":
        """Same solution with replaced branches, sampled again on the standard grid."""
        grid = sample_grid(self.u_floor, self.u_start, per_decade)
        clone = self.model_copy(update={"branches": branches, **updates})
        z = np.empty_like(grid)
        for branch in reversed(branches):
            mask = branch.covers(grid)
            z[mask] = branch.z(grid[mask])
        return clone.model_copy(update={"u": grid, "z": z})
