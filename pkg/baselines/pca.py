"""Principal component analysis with a deterministic sign convention.

Components are the top eigenvectors of the sample covariance, computed with
:func:`numpy.linalg.eigh`.  Each component is flipped so that its
largest-magnitude entry is positive (the lowest index wins ties), which makes
repeated fits bit-identical.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from errors import ConfigError, DataError

logger = logging.getLogger(__name__)

#: Eigenvalues at or below this fraction of the largest are treated as zero.
RANK_TOLERANCE = 1e-12


@dataclass(frozen=True)
class PcaModel:
    means: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray
    rank_deficient: bool = False

    @property
    def n_components(self) -> int:
        return int(self.components.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.components.shape[1])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "means": self.means.tolist(),
            "components": self.components.tolist(),
            "explained_variance": self.explained_variance.tolist(),
            "rank_deficient": self.rank_deficient,
        }


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each row so its largest-magnitude entry is positive."""
    idx = np.argmax(np.abs(vectors), axis=1)
    signs = np.sign(vectors[np.arange(vectors.shape[0]), idx])
    signs[signs == 0] = 1.0
    return vectors * signs[:, None]


def pca_fit(X: np.ndarray, k: int) -> PcaModel:
    """Fit ``k`` principal components on the rows of ``X``.

    Callers fit on training rows only.  When ``k`` exceeds the rank of the
    data the trailing components carry zero variance and the model is
    flagged ``rank_deficient``.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DataError(f"PCA expects a 2-D matrix, got shape {X.shape}")
    n_rows, n_features = X.shape
    if not 1 <= k <= n_features:
        raise ConfigError(f"component count must lie in [1, {n_features}], got {k}")
    if n_rows <= k:
        raise DataError(f"PCA with {k} component(s) needs more than {k} rows, got {n_rows}")
    if not np.isfinite(X).all():
        raise DataError("PCA input contains non-finite values")

    means = X.mean(axis=0)
    centered = X - means
    covariance = centered.T @ centered / (n_rows - 1)
    eigenvalues, eigenvectors = np.linalg.eigh(covariance)
    # eigh returns ascending eigenvalues; stable sort keeps equal ones in index order.
    order = np.argsort(-eigenvalues, kind="stable")[:k]
    variance = eigenvalues[order]
    components = _fix_signs(eigenvectors[:, order].T)

    scale = max(float(eigenvalues.max()), 0.0)
    zero = variance <= RANK_TOLERANCE * scale if scale > 0 else np.ones(k, dtype=bool)
    variance = np.where(zero, 0.0, variance)
    rank_deficient = bool(zero.any())
    if rank_deficient:
        logger.warning("PCA: %d of %d component(s) carry zero variance", int(zero.sum()), k)
    return PcaModel(means, components, variance, rank_deficient)


def _check_columns(model: PcaModel, X: np.ndarray, width: int) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != width:
        raise DataError(f"expected {width} column(s), got shape {X.shape}")
    return X


def pca_transform(model: PcaModel, X: np.ndarray) -> np.ndarray:
    X = _check_columns(model, X, model.n_features)
    return (X - model.means) @ model.components.T


def pca_inverse_transform(model: PcaModel, Z: np.ndarray) -> np.ndarray:
    Z = _check_columns(model, Z, model.n_components)
    return Z @ model.components + model.means


def pca_projector(k: int):
    """Fold projector fitting PCA on the training rows only.

    Short training folds cap the component count at one less than their row
    count.
    """

    def project(X_train: np.ndarray, X_test: np.ndarray):
        n_rows, n_features = X_train.shape
        model = pca_fit(X_train, max(1, min(k, n_features, n_rows - 1)))
        return pca_transform(model, X_train), pca_transform(model, X_test)

    return project
