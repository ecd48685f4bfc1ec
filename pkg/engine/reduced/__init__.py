"""The reduced first-order problem for z(u) = d(u)|u'|^(p-1)."""
from engine.reduced.comparison import check_comparison, diffusion_barrier, power_barrier
from engine.reduced.eta import EtaRoots, SlopeFlag, eta0_roots, eta1_root
from engine.reduced.integrator import (
    StartupSeed,
    integrate_from_origin,
    integrate_reduced,
    shoot,
    startup_at_one,
)
from engine.reduced.solution import ReducedSolution, ShotOutcome

__all__ = [
    "EtaRoots",
    "ReducedSolution",
    "ShotOutcome",
    "SlopeFlag",
    "StartupSeed",
    "check_comparison",
    "diffusion_barrier",
    "eta0_roots",
    "eta1_root",
    "integrate_from_origin",
    "integrate_reduced",
    "power_barrier",
    "shoot",
    "startup_at_one",
]
