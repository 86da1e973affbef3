from __future__ import annotations

from pathlib import Path

import pytest

from synth import SynthConfig, generate_telemetry
from taxonomy import assign_segments, default_taxonomy
from transforms import apply_pipeline



@pytest.fixture(scope="session")
def small_telemetry():
    """Seeded synthetic telemetry small enough for unit tests."""
    return generate_telemetry(SynthConfig(n_samples=1200, seed=7))


@pytest.fixture(scope="session")
def taxonomy():
    return default_taxonomy()


@pytest.fixture
def write_long(tmp_path: Path):
    def _write(text: str, name: str = "long.csv") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture(scope="session")
def transformed(small_telemetry, taxonomy):
    """Canonical and residual spaces of the small telemetry, plus its segment map."""
    space = assign_segments(small_telemetry.frame.columns, taxonomy)
    canonical, residual = apply_pipeline(small_telemetry.frame, space, taxonomy)
    return canonical, residual, space.analysis_segments()
