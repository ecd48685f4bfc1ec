"""
Export profiles, reduced solutions and reports (CSV, JSON).
"""
import json
from datetime import datetime, UTC
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from engine.coefficients.model import CoefficientSet
from engine.profile.reconstruct import WaveProfile
from engine.reduced.solution import ReducedSolution


# Default export directory
EXPORT_DIR = Path("exports")

PROFILE_COLUMNS = ["t", "u", "du_dt", "flux"]
SOLUTION_COLUMNS = ["u", "z", "dz"]


def _target(out_dir: Path | None, filename: str | None, prefix: str, suffix: str) -> Path:
    directory = Path(out_dir) if out_dir is not None else EXPORT_DIR
    directory.mkdir(parents=True, exist_ok=True)
    if filename is None:
        filename = f"{prefix}_{datetime.now(UTC).strftime('%Y%m%d_%H%M%S')}"
    return directory / f"{filename}{suffix}"


def profile_frame(profile: WaveProfile) -> pd.DataFrame:
    return pd.DataFrame(profile.table(), columns=PROFILE_COLUMNS)


def export_profile_csv(
    profile: WaveProfile,
    filename: str | None = None,
    out_dir: Path | None = None,
) -> Path:
    """
    Export a wave profile to CSV.

    Args:
        profile: Reconstructed profile
        filename: Output filename (without extension)
        out_dir: Directory to write into (default: exports/)

    Returns:
        Path to exported file
    """
    if profile.t.size == 0:
        raise ValueError("Cannot export an empty profile")
    filepath = _target(out_dir, filename, "profile", ".csv")
    profile_frame(profile).to_csv(filepath, index=False, float_format="%.12g")
    return filepath


def export_solution_csv(
    solution: ReducedSolution,
    cs: CoefficientSet,
    filename: str | None = None,
    out_dir: Path | None = None,
) -> Path:
    """Export the samples of a reduced solution (u, z, dz/du) to CSV."""
    if solution.u.size == 0:
        raise ValueError("Cannot export an empty solution")
    filepath = _target(out_dir, filename, "reduced", ".csv")
    pd.DataFrame(solution.table(cs), columns=SOLUTION_COLUMNS).to_csv(filepath, index=False, float_format="%.12g")
    return filepath


def _plain(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def export_report_json(
    report: dict[str, Any],
    filename: str | None = None,
    out_dir: Path | None = None,
) -> Path:
    """
    Export a report to JSON.

    Infinite values are written as Infinity/-Infinity.
    """
    filepath = _target(out_dir, filename, "report", ".json")
    with open(filepath, "w", encoding="utf-8") as handle:
        json.dump(report, handle, indent=2, sort_keys=True, default=_plain)
    return filepath
