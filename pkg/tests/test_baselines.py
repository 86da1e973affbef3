from __future__ import annotations

import math

import numpy as np
import pandas as pd
import pytest

from baselines import (
    FULL,
    PCA,
    REPRESENTATIONS,
    compare_representations,
    full_space,
    pca_fit,
    pca_inverse_transform,
    pca_projector,
    pca_transform,
    sign_test,
)
from errors import ConfigError, DataError
from prediction import LOGISTIC, EvaluationConfig, ModelSpec


def test_first_component_follows_the_diagonal() -> None:
    X = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0], [4.0, 4.0]])
    model = pca_fit(X, 1)

    np.testing.assert_allclose(model.components[0], np.array([1.0, 1.0]) / math.sqrt(2))
    assert model.explained_variance[0] == pytest.approx(10.0 / 3.0)


def test_full_rank_reconstruction_is_exact() -> None:
    rng = np.random.default_rng(0)
    X = rng.standard_normal((50, 4)) @ rng.standard_normal((4, 4))
    model = pca_fit(X, 4)

    np.testing.assert_allclose(pca_inverse_transform(model, pca_transform(model, X)), X, atol=1e-8)


def test_mean_row_projects_to_origin() -> None:
    rng = np.random.default_rng(1)
    X = rng.standard_normal((30, 3))
    model = pca_fit(X, 2)

    np.testing.assert_allclose(pca_transform(model, X.mean(axis=0, keepdims=True)), 0.0, atol=1e-12)


def test_components_are_orthonormal_with_positive_peaks() -> None:
    rng = np.random.default_rng(2)
    model = pca_fit(rng.standard_normal((40, 5)), 3)

    np.testing.assert_allclose(model.components @ model.components.T, np.eye(3), atol=1e-10)
    peaks = model.components[np.arange(3), np.argmax(np.abs(model.components), axis=1)]
    assert np.all(peaks > 0)
    assert np.all(np.diff(model.explained_variance) <= 0)


def test_refits_are_identical() -> None:
    X = np.random.default_rng(3).standard_normal((25, 4))
    np.testing.assert_array_equal(pca_fit(X, 2).components, pca_fit(X, 2).components)


def test_rank_deficient_data_is_flagged() -> None:
    X = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0], [4.0, 4.0]])
    model = pca_fit(X, 2)

    assert model.rank_deficient
    assert model.explained_variance[1] == 0.0


def test_pca_argument_validation() -> None:
    X = np.zeros((5, 2))
    with pytest.raises(ConfigError):
        pca_fit(X, 3)
    with pytest.raises(DataError):
        pca_fit(np.ones((2, 2)), 2)
    model = pca_fit(np.random.default_rng(4).standard_normal((10, 2)), 1)
    with pytest.raises(DataError):
        pca_transform(model, np.zeros((3, 3)))


def test_projector_caps_components_on_short_folds() -> None:
    rng = np.random.default_rng(5)
    train, test = pca_projector(10)(rng.standard_normal((4, 6)), rng.standard_normal((3, 6)))

    assert train.shape == (4, 3)
    assert test.shape == (3, 3)


def test_sign_test_drops_ties() -> None:
    result = sign_test([0.2, 0.1, 0.3, -0.1, 0.0])

    assert (result.n_positive, result.n_negative, result.n_ties) == (3, 1, 1)
    assert result.p_value == pytest.approx(0.625)


def test_sign_test_without_evidence() -> None:
    assert sign_test([0.0, 0.0]).p_value == 1.0
    assert sign_test([]).p_value == 1.0


def test_full_space_concatenates_columns() -> None:
    index = pd.Index([0, 30], name="timestamp")
    a = pd.DataFrame({"x": [1.0, 2.0]}, index=index)
    b = pd.DataFrame({"y": [3.0, 4.0]}, index=index)

    assert list(full_space(a, b).columns) == ["x", "y"]
    with pytest.raises(DataError):
        full_space(a, a)
    with pytest.raises(DataError):
        full_space(a, b.iloc[:1])


def test_four_way_comparison(small_telemetry, transformed) -> None:
    canonical, residual, _ = transformed
    config = EvaluationConfig(
        n_splits=(2,), deltas=(900.0,), windows=(300.0,), models=(ModelSpec.default(LOGISTIC),)
    )
    comparison = compare_representations(canonical, residual, small_telemetry.faults, config)

    assert comparison.report.representations == REPRESENTATIONS
    assert comparison.pca_components == canonical.shape[1]
    assert set(comparison.paired) == {"canonical-residual", "canonical-full", "canonical-pca"}
    assert comparison.paired["canonical-pca"]["n"] == 2
    table = comparison.table()
    assert all(math.isfinite(table[name]) for name in (FULL, PCA))
    assert set(comparison.to_dict()) == {"pca_components", "mean_risk", "paired", "report"}
