from __future__ import annotations

import math

import numpy as np
import pytest

from errors import ColumnTransformError, ConfigError, DomainError, InsufficientDataError, TemporalOrderError
from helpers import make_frame
from taxonomy import assign_segments
from transforms import (
    RollingBaseline,
    apply_pipeline,
    conditional_zscore,
    robust_parameters,
    robust_scale,
    transform_bsr,
    transform_gbd,
    transform_ltc,
    transform_mcr,
    transform_network_rate,
    transform_rbdr,
    transform_residual,
    transform_warmup,
)


def test_mcr_clips_negative_steps() -> None:
    assert transform_mcr([5, 7, 6, 10]).tolist() == [2.0, 0.0, 4.0]


def test_mcr_counter_reset_yields_zero() -> None:
    assert transform_mcr([100, 2, 5]).tolist() == [0.0, 3.0]


def test_mcr_needs_two_samples() -> None:
    with pytest.raises(InsufficientDataError):
        transform_mcr([1.0])


def test_ltc_is_log1p() -> None:
    np.testing.assert_allclose(transform_ltc([9, 99]), [math.log(10), math.log(100)])


def test_ltc_rejects_negative_values() -> None:
    with pytest.raises(DomainError) as info:
        transform_ltc([1.0, -2.0])
    assert info.value.index == 1


def test_bsr_of_constant_series() -> None:
    out = transform_bsr([2, 2, 2, 2], RollingBaseline(window=2, epsilon=0.001))

    assert len(out) == 3
    np.testing.assert_allclose(out, 2 / 2.001)


def test_bsr_against_rolling_median() -> None:
    out = transform_bsr([1, 1, 4], RollingBaseline(window=2, epsilon=0.0))
    np.testing.assert_allclose(out, [1.0, 1.6])


def test_bsr_zero_baseline_without_epsilon() -> None:
    with pytest.raises(DomainError):
        transform_bsr([0, 0, 1], RollingBaseline(window=2, epsilon=0.0))


def test_network_rate_divides_by_elapsed_time() -> None:
    assert transform_network_rate([0, 30, 30], [0, 10, 40]).tolist() == [3.0, 0.0]


def test_network_rate_requires_increasing_timestamps() -> None:
    with pytest.raises(TemporalOrderError):
        transform_network_rate([0, 1, 2], [0, 10, 10])


def test_gbd_relative_to_median() -> None:
    np.testing.assert_allclose(transform_gbd([2, 4, 6], epsilon=0.0), [-0.5, 0.0, 0.5])


def test_gbd_of_constant_series_is_zero() -> None:
    assert transform_gbd([3, 3, 3]).tolist() == [0.0, 0.0, 0.0]
    assert transform_gbd([0, 0, 0], epsilon=0.0).tolist() == [0.0, 0.0, 0.0]


def test_rbdr_drift_ratio() -> None:
    out = transform_rbdr([1, 1, 2], RollingBaseline(window=2, epsilon=0.0))
    np.testing.assert_allclose(out, [0.0, 1.0 / 3.0])


def test_rbdr_of_constant_series_is_zero() -> None:
    out = transform_rbdr([0, 0, 0, 0], RollingBaseline(window=3, epsilon=0.0))
    assert out.tolist() == [0.0, 0.0]


def test_rolling_baseline_validation() -> None:
    with pytest.raises(ConfigError):
        RollingBaseline(window=1)
    with pytest.raises(ConfigError):
        RollingBaseline(window=5, epsilon=-1.0)


def test_warmups() -> None:
    baseline = RollingBaseline(window=5)
    assert transform_warmup("MCR", baseline) == 1
    assert transform_warmup("LTC", baseline) == 0
    assert transform_warmup("RBDR", baseline) == 4


def test_robust_scale_maps_quartiles() -> None:
    out = robust_scale([1, 2, 3, 4, 5])

    assert out[2] == 0.0
    assert out[4] == 1.0


def test_robust_scale_degenerate_iqr_only_shifts() -> None:
    params = robust_parameters([1, 1, 1, 1, 9])
    assert params.degenerate
    assert robust_scale([1, 1, 1, 1, 9]).tolist() == [0.0, 0.0, 0.0, 0.0, 8.0]


def test_robust_scale_needs_four_samples() -> None:
    with pytest.raises(InsufficientDataError):
        robust_scale([1, 2, 3])


def test_conditional_zscore_leaves_constant_series() -> None:
    assert conditional_zscore([4, 4, 4]).tolist() == [4.0, 4.0, 4.0]


def test_monitoring_family_is_identity() -> None:
    assert transform_residual([1, 5, 2], "Monitoring").tolist() == [1.0, 5.0, 2.0]


def test_ratio_family_leaves_constant_series() -> None:
    assert transform_residual([0.25, 0.25, 0.25], "Ratio & bounded").tolist() == [0.25, 0.25, 0.25]


def test_size_family_on_short_series() -> None:
    with pytest.raises(InsufficientDataError):
        transform_residual([0.0, math.e - 1], "Size & volume")


def test_weak_dynamic_family_scales_by_peak_step() -> None:
    assert transform_residual([0, 2, 1, 5], "Weak dynamic").tolist() == [0.5, -0.25, 1.0]


def test_pipeline_aligns_canonical_columns(taxonomy) -> None:
    frame = make_frame(
        {
            "processcpusecondstotal": [10, 12, 15, 15, 20, 26],
            "cassandrareadlatency99th": [1, 3, 2, 8, 4, 5],
        }
    )
    space = assign_segments(frame.columns, taxonomy)
    canonical, residual = apply_pipeline(frame, space, taxonomy, RollingBaseline(window=2))

    assert canonical.shape == (5, 2)
    assert list(canonical.index) == list(frame.index[1:])
    assert residual.shape == (5, 0)
    assert canonical.provenance["processcpusecondstotal"]["transform"] == "MCR"
    assert canonical.provenance["cassandrareadlatency99th"]["warmup"] == 0
    expected = robust_scale(np.log1p([3, 2, 8, 4, 5]))
    np.testing.assert_allclose(canonical.frame["cassandrareadlatency99th"], expected)


def test_pipeline_with_only_monitoring_columns(taxonomy) -> None:
    frame = make_frame({"scrapeduration": [1, 5, 2, 7], "telegrafgathererrors": [0, 1, 0, 3]})
    space = assign_segments(frame.columns, taxonomy, require_canonical=False)
    canonical, residual = apply_pipeline(frame, space, taxonomy)

    assert canonical.shape == (4, 0)
    np.testing.assert_array_equal(residual.frame.to_numpy(), frame.to_numpy())


def test_pipeline_reports_failing_column(taxonomy) -> None:
    frame = make_frame(
        {
            "processcpusecondstotal": [10, 12, 15, 15, 20, 26],
            "cassandrareadlatency99th": [1, 3, -2, 8, 4, 5],
        }
    )
    space = assign_segments(frame.columns, taxonomy)
    with pytest.raises(ColumnTransformError) as info:
        apply_pipeline(frame, space, taxonomy)
    assert info.value.column == "cassandrareadlatency99th"


def test_pipeline_lists_degenerate_columns(taxonomy) -> None:
    frame = make_frame(
        {
            "processcpusecondstotal": [10, 12, 15, 15, 20, 26],
            "cassandrareadlatency99th": [2, 2, 2, 2, 2, 9],
        }
    )
    space = assign_segments(frame.columns, taxonomy)
    canonical, residual = apply_pipeline(frame, space, taxonomy)

    assert canonical.degenerate_columns() == ["cassandrareadlatency99th"]
    assert residual.degenerate_columns() == []


def test_pipeline_over_generated_telemetry(small_telemetry, taxonomy) -> None:
    frame = small_telemetry.frame
    space = assign_segments(frame.columns, taxonomy)
    canonical, residual = apply_pipeline(frame, space, taxonomy)

    assert canonical.shape[1] + residual.shape[1] + len(space.unmatched) == frame.shape[1]
    assert canonical.index.equals(residual.index)
    assert np.isfinite(canonical.frame.to_numpy()).all()
