from __future__ import annotations

import numpy as np
import pandas as pd
import pytest

from errors import ConfigError
from separability import analyze_segments, spearman_rho
from synth import CANONICAL_POOLS, SegmentSpec, SynthConfig, generate_telemetry
from taxonomy import assign_segments
from transforms import apply_pipeline


def test_generated_frame_shape(small_telemetry) -> None:
    frame = small_telemetry.frame

    assert frame.shape == (1200, 6 * 4 + 20)
    assert list(frame.columns) == sorted(frame.columns)
    assert frame.index.is_monotonic_increasing
    assert (np.diff(frame.index.to_numpy()) == 30).all()
    assert not frame.isna().to_numpy().any()


def test_generation_is_reproducible() -> None:
    config = SynthConfig(n_samples=300, seed=21)
    first, second = generate_telemetry(config), generate_telemetry(config)

    pd.testing.assert_frame_equal(first.frame, second.frame)
    assert first.faults == second.faults


def test_seed_changes_the_data() -> None:
    a = generate_telemetry(SynthConfig(n_samples=300, seed=1)).frame
    b = generate_telemetry(SynthConfig(n_samples=300, seed=2)).frame

    assert not np.allclose(a.to_numpy(), b.to_numpy())


def test_result_unpacks_into_frame_faults_and_truth(small_telemetry) -> None:
    frame, faults, truth = small_telemetry

    assert frame is small_telemetry.frame
    assert [s.name for s in truth.canonical_segments] == list(CANONICAL_POOLS)
    assert truth.keep_list <= set(frame.columns)


def test_ground_truth_matches_default_assignment(small_telemetry, taxonomy) -> None:
    space = assign_segments(small_telemetry.frame.columns, taxonomy)

    for spec in small_telemetry.ground_truth.canonical_segments:
        assert sorted(space.canonical[spec.name]) == sorted(spec.patterns)
    assert space.unmatched == []


def test_faults_follow_latent_excursions() -> None:
    telemetry = generate_telemetry(SynthConfig(seed=7))
    times = telemetry.faults.times()
    index = telemetry.frame.index

    assert len(times) > 0
    assert (times >= index[0] + telemetry.config.fault_lead).all()
    assert (times <= index[-1]).all()
    latent = telemetry.latents[telemetry.latents.columns[telemetry.config.fault_latent_index]]
    for t in times:
        assert latent.loc[t - telemetry.config.fault_lead] >= telemetry.config.fault_threshold


def test_latent_recovers_when_a_fault_fires() -> None:
    telemetry = generate_telemetry(SynthConfig(n_samples=2000, seed=3))
    latent = telemetry.latents[telemetry.latents.columns[telemetry.config.fault_latent_index]]

    assert len(telemetry.faults) > 0
    for t in telemetry.faults.times():
        assert latent.loc[t] == telemetry.config.recovery_level


def test_recovery_can_be_disabled() -> None:
    kept = generate_telemetry(SynthConfig(n_samples=2000, seed=3, recovery_level=None))
    latent = kept.latents[kept.latents.columns[kept.config.fault_latent_index]]

    assert len(kept.faults) > 0
    assert all(latent.loc[t - kept.config.fault_lead] >= kept.config.fault_threshold for t in kept.faults.times())
    assert any(latent.loc[t] != 0.0 for t in kept.faults.times())


def test_missing_cells_spare_first_and_last_rows() -> None:
    frame = generate_telemetry(SynthConfig(n_samples=400, missing_rate=0.2, seed=5)).frame

    assert frame.isna().to_numpy().mean() == pytest.approx(0.2, abs=0.03)
    assert not frame.iloc[0].isna().any()
    assert not frame.iloc[-1].isna().any()


def test_planted_duplicates_track_their_source() -> None:
    frame = generate_telemetry(SynthConfig(n_samples=400, duplicates_per_segment=1, seed=8)).frame
    pool = CANONICAL_POOLS["Latency"]

    assert frame.shape[1] == 6 * 5 + 20
    assert spearman_rho(frame[pool[0]], frame[pool[4]]) > 0.999


def test_noise_free_segments_are_perfectly_coherent(taxonomy) -> None:
    segments = tuple(SegmentSpec(name, noise_std=0.0) for name in CANONICAL_POOLS)
    telemetry = generate_telemetry(SynthConfig(n_samples=500, segments=segments, seed=4))
    space = assign_segments(telemetry.frame.columns, taxonomy)
    canonical, _ = apply_pipeline(telemetry.frame, space, taxonomy)
    report = analyze_segments(canonical, {k: space.canonical[k] for k in ("Latency", "State")})

    assert report.per_segment_icc["Latency"].icc == pytest.approx(1.0)
    assert report.per_segment_icc["State"].icc == pytest.approx(1.0)


@pytest.mark.parametrize(
    "overrides",
    [
        {"n_samples": 10},
        {"cadence": 0},
        {"n_residual": 0},
        {"n_residual": 100},
        {"latent_persistence": 1.0},
        {"missing_rate": 1.0},
        {"fault_latent_index": 6},
        {"segments": (SegmentSpec("Unknown"),), "fault_latent_index": 0},
        {"segments": (SegmentSpec("Latency", n_features=8),), "fault_latent_index": 0},
    ],
)
def test_invalid_configuration(overrides: dict) -> None:
    with pytest.raises(ConfigError):
        SynthConfig(**overrides)


def test_config_serialises_segments() -> None:
    data = SynthConfig().to_dict()

    assert data["segments"][0] == {"name": "Cumulative", "n_features": 4, "loading_range": (0.6, 1.0), "noise_std": 0.4}
    assert data["seed"] == SynthConfig().seed
