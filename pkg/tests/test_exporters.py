"""
Unit Tests for CSV and JSON exporters
"""
import json
import math

import numpy as np
import pandas as pd
import pytest

from engine.profile.reconstruct import WaveProfile
from engine.tools.exporters import (
    PROFILE_COLUMNS,
    export_profile_csv,
    export_report_json,
    export_solution_csv,
    profile_frame,
)

pytestmark = pytest.mark.unit


@pytest.fixture
def small_profile():
    t = np.linspace(-1.0, 1.0, 5)
    u = 0.5 - 0.2 * t
    return WaveProfile(
        c=2.0, p=2.0, t=t, u=u, du_dt=np.full(5, -0.2), flux=np.full(5, 0.2),
        alpha=-math.inf, beta=math.inf, integrated=(-1.0, 1.0),
    )


def test_profile_csv(small_profile, tmp_path):
    """Test the profile CSV layout"""
    path = export_profile_csv(small_profile, filename="wave", out_dir=tmp_path)
    assert path == tmp_path / "wave.csv"
    frame = pd.read_csv(path)
    assert list(frame.columns) == PROFILE_COLUMNS
    np.testing.assert_allclose(frame["u"], small_profile.u)
    assert profile_frame(small_profile).shape == (5, 4)


def test_generated_filename(small_profile, tmp_path):
    """Test the timestamped default name"""
    path = export_profile_csv(small_profile, out_dir=tmp_path / "nested")
    assert path.parent == tmp_path / "nested"
    assert path.name.startswith("profile_")


def test_empty_profile_rejected(small_profile, tmp_path):
    """Test that an empty profile is not written"""
    empty = small_profile.model_copy(update={"t": np.empty(0), "u": np.empty(0)})
    with pytest.raises(ValueError, match="empty profile"):
        export_profile_csv(empty, out_dir=tmp_path)


def test_report_json(tmp_path):
    """Test numpy values and infinities in reports"""
    path = export_report_json(
        {"c": np.float64(2.0), "beta": math.inf, "samples": np.arange(3)},
        filename="report", out_dir=tmp_path,
    )
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["c"] == 2.0
    assert data["beta"] == math.inf
    assert data["samples"] == [0, 1, 2]


@pytest.mark.integration
def test_solution_csv(fisher, fisher_estimate, tmp_path):
    """Test the reduced-solution CSV"""
    path = export_solution_csv(fisher_estimate.critical, fisher, filename="reduced", out_dir=tmp_path)
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["u", "z", "dz"]
    assert (frame["z"] > 0).all()
