"""Risk, discrimination and conditional-dependence metrics."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np
from sklearn.metrics import log_loss as _sk_log_loss
from sklearn.metrics import roc_auc_score

from config import SEMSEG_THETA_Q
from errors import ConfigError, DataError
from prediction.models import clip_probabilities

logger = logging.getLogger(__name__)


def log_loss(y: Sequence[int], p: Sequence[float]) -> float:
    """Mean binary cross-entropy of clipped probabilities."""
    y_arr = np.asarray(y, dtype=float)
    p_arr = np.asarray(p, dtype=float)
    if y_arr.shape != p_arr.shape or y_arr.size == 0:
        raise DataError(f"log_loss needs equal non-empty lengths, got {y_arr.size} and {p_arr.size}")
    return float(_sk_log_loss(y_arr, clip_probabilities(p_arr), labels=[0, 1]))


def auc(y: Sequence[int], p: Sequence[float]) -> Optional[float]:
    """ROC AUC with ties counted as one half; ``None`` when a class is missing."""
    y_arr = np.asarray(y)
    if y_arr.size == 0 or np.all(y_arr == y_arr[0]):
        return None
    return float(roc_auc_score(y_arr, np.asarray(p, dtype=float)))


def baseline_risk(y_train: Sequence[int], y_test: Sequence[int]) -> float:
    """Log-loss of the constant predictor at the training positive rate."""
    rate = float(np.mean(y_train)) if len(y_train) else 0.0
    return log_loss(y_test, np.full(len(y_test), rate))


@dataclass(frozen=True)
class ConditionalCorrelation:
    theta_quantile: float
    theta: float
    covariance: Optional[float]
    correlation: Optional[float]
    n: int

    def to_dict(self) -> dict:
        return asdict(self)


def conditional_high_risk_corr(
    p_canonical: Sequence[float],
    p_residual: Sequence[float],
    theta_quantile: float = SEMSEG_THETA_Q,
) -> ConditionalCorrelation:
    """Dependence between residual and canonical risk where canonical risk is high.

    Only indices with ``p_canonical`` strictly above its ``theta_quantile``
    quantile are kept.  The correlation is ``None`` for fewer than three such
    indices or when either restricted series is constant.
    """
    if not 0.0 < theta_quantile < 1.0:
        raise ConfigError(f"theta_quantile must lie in (0, 1), got {theta_quantile}")
    pc = np.asarray(p_canonical, dtype=float)
    pr = np.asarray(p_residual, dtype=float)
    if pc.shape != pr.shape:
        raise DataError(f"prediction lengths differ: {pc.size} and {pr.size}")
    if pc.size == 0:
        return ConditionalCorrelation(theta_quantile, float("nan"), None, None, 0)

    theta = float(np.quantile(pc, theta_quantile, method="linear"))
    mask = pc > theta
    n = int(mask.sum())
    covariance = float(np.cov(pr[mask], pc[mask], ddof=1)[0, 1]) if n >= 2 else None
    correlation = None
    if n >= 3 and np.ptp(pr[mask]) > 0 and np.ptp(pc[mask]) > 0:
        correlation = float(np.corrcoef(pr[mask], pc[mask])[0, 1])
    return ConditionalCorrelation(theta_quantile, theta, covariance, correlation, n)
