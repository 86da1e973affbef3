"""Deterministic probabilistic classifiers used to estimate predictive risk.

Three model classes are available so conclusions can be checked for
robustness across functional families:

* ``LOGISTIC``: L2-regularised logistic regression fitted by full-batch
  gradient descent on standardised features.
* ``FOREST``: bagged depth-limited decision trees with per-split feature
  subsampling; the probability is the mean leaf frequency, smoothed towards
  the training prior so a pure leaf is never certain.
* ``BOOSTED``: gradient boosting of shallow regression trees on the log-loss
  gradient with L2-damped Newton leaf values.

Every model is trained with inverse-frequency sample weights by default and
is fully determined by its :class:`ModelSpec` and the training data.  The
weights shift the fitted odds towards the minority class, so predictions are
mapped back to the training prior before they are scored.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional

import numpy as np
from sklearn.tree import DecisionTreeClassifier, DecisionTreeRegressor

from errors import ConfigError, DataError

logger = logging.getLogger(__name__)

LOGISTIC = "LOGISTIC"
FOREST = "FOREST"
BOOSTED = "BOOSTED"
MODEL_KINDS = (LOGISTIC, FOREST, BOOSTED)

PROB_CLIP = 1e-6


@dataclass(frozen=True)
class ModelSpec:
    """Model class plus hyperparameters.

    ``learning_rate`` and ``n_iterations`` drive LOGISTIC and BOOSTED;
    ``n_trees``, ``max_depth`` and ``feature_fraction`` drive FOREST (BOOSTED
    uses ``boost_depth``).
    """

    kind: str = LOGISTIC
    learning_rate: float = 0.1
    n_iterations: int = 300
    l2: float = 5e-2
    n_trees: int = 25
    max_depth: int = 4
    boost_depth: int = 2
    feature_fraction: float = 0.7
    min_samples_leaf: int = 5
    seed: int = 0
    class_weighting: bool = True

    def __post_init__(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise ConfigError(f"unknown model kind {self.kind!r}, expected one of {MODEL_KINDS}")
        positive = {
            "learning_rate": self.learning_rate,
            "n_iterations": self.n_iterations,
            "n_trees": self.n_trees,
            "max_depth": self.max_depth,
            "boost_depth": self.boost_depth,
            "feature_fraction": self.feature_fraction,
            "min_samples_leaf": self.min_samples_leaf,
        }
        for name, value in positive.items():
            if not value > 0:
                raise ConfigError(f"{name} must be positive, got {value}")
        if self.feature_fraction > 1:
            raise ConfigError(f"feature_fraction must be <= 1, got {self.feature_fraction}")
        if self.l2 < 0:
            raise ConfigError(f"l2 must be non-negative, got {self.l2}")

    @classmethod
    def default(cls, kind: str, seed: int = 0) -> "ModelSpec":
        if kind == BOOSTED:
            return cls(kind=kind, learning_rate=0.1, n_iterations=60, seed=seed)
        if kind == LOGISTIC:
            return cls(kind=kind, learning_rate=0.1, n_iterations=300, seed=seed)
        return cls(kind=kind, seed=seed)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))


def clip_probabilities(p: np.ndarray) -> np.ndarray:
    return np.clip(np.asarray(p, dtype=float), PROB_CLIP, 1.0 - PROB_CLIP)


def class_weights(y: np.ndarray, enabled: bool = True) -> np.ndarray:
    """Inverse-frequency weights normalised to a mean of 1."""
    y = np.asarray(y)
    if not enabled:
        return np.ones(y.size)
    n = y.size
    n_pos = int(y.sum())
    n_neg = n - n_pos
    if n_pos == 0 or n_neg == 0:
        return np.ones(n)
    return np.where(y == 1, n / (2.0 * n_pos), n / (2.0 * n_neg))


def prior_correction(p: np.ndarray, y: np.ndarray, sample_weight: np.ndarray) -> np.ndarray:
    """Rescale odds fitted under ``sample_weight`` to the unweighted prior of ``y``.

    ``odds * (pi / (1 - pi)) / (pi_w / (1 - pi_w))`` where ``pi`` is the
    positive rate and ``pi_w`` the weighted positive rate.
    """
    y = np.asarray(y, dtype=float)
    w = np.asarray(sample_weight, dtype=float)
    pi = float(np.mean(y))
    pi_w = float(np.sum(w * y) / np.sum(w))
    if pi in (0.0, 1.0) or np.isclose(pi, pi_w):
        return np.asarray(p, dtype=float)
    p = clip_probabilities(p)
    odds = p / (1.0 - p) * (pi / (1.0 - pi)) * ((1.0 - pi_w) / pi_w)
    return odds / (1.0 + odds)


def is_single_class(y: np.ndarray) -> bool:
    y = np.asarray(y)
    return y.size == 0 or bool(np.all(y == y[0]))


class LogisticModel:
    def __init__(self, spec: ModelSpec) -> None:
        self.spec = spec
        self.mean_: Optional[np.ndarray] = None
        self.scale_: Optional[np.ndarray] = None
        self.coef_: Optional[np.ndarray] = None
        self.intercept_: float = 0.0

    def _standardise(self, X: np.ndarray) -> np.ndarray:
        return (X - self.mean_) / self.scale_

    def fit(self, X: np.ndarray, y: np.ndarray, sample_weight: np.ndarray) -> "LogisticModel":
        self.mean_ = X.mean(axis=0)
        scale = X.std(axis=0)
        self.scale_ = np.where(scale > 0, scale, 1.0)
        Z = self._standardise(X)
        w = sample_weight / sample_weight.sum()

        coef = np.zeros(Z.shape[1])
        intercept = 0.0
        for _ in range(self.spec.n_iterations):
            residual = _sigmoid(Z @ coef + intercept) - y
            coef -= self.spec.learning_rate * (Z.T @ (w * residual) + self.spec.l2 * coef)
            intercept -= self.spec.learning_rate * float(np.sum(w * residual))
        self.coef_, self.intercept_ = coef, intercept
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return _sigmoid(self._standardise(X) @ self.coef_ + self.intercept_)


class ForestModel:
    def __init__(self, spec: ModelSpec) -> None:
        self.spec = spec
        self.estimators_: List[DecisionTreeClassifier] = []
        self.prior_: float = 0.5

    def fit(self, X: np.ndarray, y: np.ndarray, sample_weight: np.ndarray) -> "ForestModel":
        rng = np.random.default_rng(self.spec.seed)
        self.prior_ = float(np.sum(sample_weight * y) / np.sum(sample_weight))
        n = len(X)
        self.estimators_ = []
        for i in range(self.spec.n_trees):
            indices = rng.integers(0, n, size=n)
            tree = DecisionTreeClassifier(
                max_depth=self.spec.max_depth,
                max_features=self.spec.feature_fraction,
                min_samples_leaf=self.spec.min_samples_leaf,
                random_state=self.spec.seed + i,
            )
            tree.fit(X[indices], y[indices], sample_weight=sample_weight[indices])
            self.estimators_.append(tree)
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        probas = np.zeros(len(X))
        for tree in self.estimators_:
            probas += self._leaf_rate(tree, X)
        return probas / len(self.estimators_)

    def _leaf_rate(self, tree: DecisionTreeClassifier, X: np.ndarray) -> np.ndarray:
        """Weighted positive frequency of each row's leaf, smoothed towards the prior.

        ``(w_pos + prior) / (w_leaf + 1)``; a pure leaf never yields exactly 0 or 1.
        """
        value = tree.tree_.value[:, 0, :]
        weight = tree.tree_.weighted_n_node_samples
        # A bootstrap sample may hold a single class.
        classes = list(tree.classes_)
        if 1 in classes:
            share = value[:, classes.index(1)] / value.sum(axis=1)
        else:
            share = np.zeros(len(weight))
        rate = (share * weight + self.prior_) / (weight + 1.0)
        return rate[tree.apply(X)]


class BoostedModel:
    #: Cap on a leaf's Newton step in log-odds.
    MAX_LEAF_STEP = 4.0
    #: L2 penalty added to the hessian sum of every leaf.
    LEAF_L2 = 1.0

    def __init__(self, spec: ModelSpec) -> None:
        self.spec = spec
        self.init_score_: float = 0.0
        self.estimators_: List[DecisionTreeRegressor] = []
        self.leaf_values_: List[np.ndarray] = []

    def fit(self, X: np.ndarray, y: np.ndarray, sample_weight: np.ndarray) -> "BoostedModel":
        w = sample_weight
        pos_rate = float(np.clip(np.sum(w * y) / np.sum(w), PROB_CLIP, 1 - PROB_CLIP))
        self.init_score_ = float(np.log(pos_rate / (1 - pos_rate)))
        F = np.full(len(y), self.init_score_)
        self.estimators_, self.leaf_values_ = [], []
        for i in range(self.spec.n_iterations):
            p = _sigmoid(F)
            residual = y - p
            tree = DecisionTreeRegressor(
                max_depth=self.spec.boost_depth,
                min_samples_leaf=self.spec.min_samples_leaf,
                random_state=self.spec.seed + i,
            )
            tree.fit(X, residual, sample_weight=w)
            leaves = tree.apply(X)
            hessian = w * p * (1 - p)
            # Leaf values indexed by node id.
            values = np.zeros(tree.tree_.node_count)
            for leaf in np.unique(leaves):
                mask = leaves == leaf
                gamma = np.sum(w[mask] * residual[mask]) / (np.sum(hessian[mask]) + self.LEAF_L2)
                values[leaf] = np.clip(gamma, -self.MAX_LEAF_STEP, self.MAX_LEAF_STEP)
            F += self.spec.learning_rate * values[leaves]
            self.estimators_.append(tree)
            self.leaf_values_.append(values)
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        F = np.full(len(X), self.init_score_)
        for tree, values in zip(self.estimators_, self.leaf_values_):
            F += self.spec.learning_rate * values[tree.apply(X)]
        return _sigmoid(F)


_MODELS = {LOGISTIC: LogisticModel, FOREST: ForestModel, BOOSTED: BoostedModel}


def fit_predict(
    spec: ModelSpec, X_train: np.ndarray, y_train: np.ndarray, X_test: np.ndarray
) -> np.ndarray:
    """Train ``spec`` on the training rows and return clipped test probabilities.

    A single-class training fold yields the clipped empirical base rate as a
    constant prediction; callers flag such folds with :func:`is_single_class`.
    """
    X_train = np.asarray(X_train, dtype=float)
    X_test = np.asarray(X_test, dtype=float)
    y_train = np.asarray(y_train, dtype=float)
    if np.isnan(X_train).any() or np.isnan(X_test).any():
        raise DataError("features contain NaN")
    if X_train.ndim != 2 or X_test.ndim != 2 or X_train.shape[1] != X_test.shape[1]:
        raise DataError(f"feature shapes {X_train.shape} and {X_test.shape} do not match")
    if len(X_train) != len(y_train) or len(X_train) == 0:
        raise DataError(f"{len(X_train)} training row(s) for {len(y_train)} label(s)")

    if is_single_class(y_train) or X_train.shape[1] == 0:
        rate = float(np.mean(y_train))
        return clip_probabilities(np.full(len(X_test), rate))

    weights = class_weights(y_train, spec.class_weighting)
    model = _MODELS[spec.kind](spec).fit(X_train, y_train, weights)
    return clip_probabilities(prior_correction(model.predict_proba(X_test), y_train, weights))
