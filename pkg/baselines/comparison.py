"""Four-way comparison of canonical, residual, full and PCA representations."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.stats import binomtest

from baselines.pca import pca_projector
from errors import DataError
from prediction.evaluation import (
    CANONICAL,
    RESIDUAL,
    EvaluationConfig,
    Representation,
    RiskReport,
    evaluate_representations,
)
from prediction.labels import FaultLog

logger = logging.getLogger(__name__)

FULL = "full"
PCA = "pca"
REPRESENTATIONS = (CANONICAL, RESIDUAL, FULL, PCA)


@dataclass(frozen=True)
class SignTest:
    n_positive: int
    n_negative: int
    n_ties: int
    p_value: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_positive": self.n_positive,
            "n_negative": self.n_negative,
            "n_ties": self.n_ties,
            "p_value": self.p_value,
        }


def sign_test(differences: Sequence[float]) -> SignTest:
    """Two-sided binomial sign test; zero differences are dropped."""
    d = np.asarray(differences, dtype=float)
    pos = int(np.sum(d > 0))
    neg = int(np.sum(d < 0))
    ties = int(d.size - pos - neg)
    if pos + neg == 0:
        return SignTest(pos, neg, ties, 1.0)
    p = float(binomtest(pos, pos + neg, 0.5, alternative="two-sided").pvalue)
    return SignTest(pos, neg, ties, p)


def full_space(canonical: pd.DataFrame, residual: pd.DataFrame) -> pd.DataFrame:
    """Column-wise concatenation of two frames sharing timestamps."""
    if not canonical.index.equals(residual.index):
        raise DataError("canonical and residual frames do not share timestamps")
    overlap = set(canonical.columns) & set(residual.columns)
    if overlap:
        raise DataError(f"columns present in both spaces: {sorted(overlap)}")
    return pd.concat([canonical, residual], axis=1)


@dataclass
class Comparison:
    report: RiskReport
    pca_components: int
    paired: Dict[str, Dict[str, Any]]

    def table(self) -> Dict[str, Optional[float]]:
        """Mean log-loss per representation."""
        return {name: self.report.mean_risk(name) for name in self.report.representations}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pca_components": self.pca_components,
            "mean_risk": self.table(),
            "paired": self.paired,
            "report": self.report.to_dict(),
        }


def compare_representations(
    canonical: pd.DataFrame,
    residual: pd.DataFrame,
    faults: FaultLog,
    config: Optional[EvaluationConfig] = None,
    *,
    full: Optional[pd.DataFrame] = None,
    pca_components: Optional[int] = None,
    progress: bool = False,
) -> Comparison:
    """Evaluate the four representations under identical folds and models.

    PCA is fitted inside every fold on its training rows, with as many
    components as the canonical frame has columns unless ``pca_components``
    says otherwise.
    """
    canonical = getattr(canonical, "frame", canonical)
    residual = getattr(residual, "frame", residual)
    if full is None:
        full = full_space(canonical, residual)
    k = int(pca_components or canonical.shape[1])
    logger.info("Comparing representations with %d PCA component(s) over %d full column(s)", k, full.shape[1])

    reps: List[Representation] = [
        Representation(CANONICAL, canonical),
        Representation(RESIDUAL, residual),
        Representation(FULL, full),
        Representation(PCA, full, projector=pca_projector(k)),
    ]
    report = evaluate_representations(reps, faults, config or EvaluationConfig(), progress=progress)

    paired = {}
    for other in (RESIDUAL, FULL, PCA):
        diffs = report.paired_differences(CANONICAL, other)
        paired[f"{CANONICAL}-{other}"] = {
            "mean_difference": float(np.mean(diffs)) if diffs else None,
            "n": len(diffs),
            "sign_test": sign_test(diffs).to_dict(),
        }
    return Comparison(report, k, paired)
