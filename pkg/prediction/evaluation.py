"""Canonical-versus-residual risk evaluation under time-aware cross-validation.

The engine walks the sweep grid in a fixed order (window, horizon, split
count, model, representation, fold).  For every cell it trains the same
:class:`~prediction.models.ModelSpec` on each representation, so the
representations differ only in their features.  Results are keyed by
``(representation, model, n_splits, horizon_delta, window)``, and the report
serialises them sorted by that key.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from config import SEMSEG_THETA_Q
from errors import ConfigError, DataError, InsufficientDataError
from prediction.labels import FaultLog, LabeledDataset, aggregate_frame, label_horizon
from prediction.metrics import (
    ConditionalCorrelation,
    auc,
    baseline_risk,
    conditional_high_risk_corr,
    log_loss,
)
from prediction.models import BOOSTED, FOREST, LOGISTIC, ModelSpec, fit_predict, is_single_class
from prediction.splits import Fold, time_splits

try:  # pragma: no cover - optional progress bar
    from tqdm import tqdm
except ModuleNotFoundError:  # pragma: no cover
    tqdm = None

logger = logging.getLogger(__name__)

CANONICAL = "canonical"
RESIDUAL = "residual"

#: Maps training and test rows of one fold into the feature space a model sees.
Projector = Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]

CellKey = Tuple[str, str, int, float, float]


@dataclass(frozen=True)
class EvaluationConfig:
    """Sweep grid for :func:`evaluate_decomposition`."""

    n_splits: Tuple[int, ...] = tuple(range(2, 10))
    deltas: Tuple[float, ...] = (300.0, 900.0)
    windows: Tuple[float, ...] = (300.0, 600.0, 900.0, 1200.0)
    models: Tuple[ModelSpec, ...] = (
        ModelSpec.default(LOGISTIC),
        ModelSpec.default(FOREST),
        ModelSpec.default(BOOSTED),
    )
    theta_quantile: float = SEMSEG_THETA_Q

    def __post_init__(self) -> None:
        for name in ("n_splits", "deltas", "windows", "models"):
            values = tuple(getattr(self, name))
            if not values:
                raise ConfigError(f"{name} must not be empty")
            object.__setattr__(self, name, values)
        if any(int(n) != n or n < 2 for n in self.n_splits):
            raise ConfigError(f"every n_splits value must be an integer >= 2, got {self.n_splits}")
        if any(d <= 0 for d in self.deltas):
            raise ConfigError(f"horizon deltas must be positive, got {self.deltas}")
        if any(w <= 0 for w in self.windows):
            raise ConfigError(f"aggregation windows must be positive, got {self.windows}")
        kinds = [m.kind for m in self.models]
        if len(set(kinds)) != len(kinds):
            raise ConfigError(f"each model kind may appear once, got {kinds}")
        if not 0.0 < self.theta_quantile < 1.0:
            raise ConfigError(f"theta_quantile must lie in (0, 1), got {self.theta_quantile}")

    @property
    def n_cells(self) -> int:
        return len(self.n_splits) * len(self.deltas) * len(self.windows) * len(self.models)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_splits": list(self.n_splits),
            "deltas": list(self.deltas),
            "windows": list(self.windows),
            "models": [m.to_dict() for m in self.models],
            "theta_quantile": self.theta_quantile,
        }


@dataclass(frozen=True)
class Representation:
    """A named feature frame, optionally re-projected inside every fold."""

    name: str
    frame: pd.DataFrame
    projector: Optional[Projector] = None


@dataclass(frozen=True)
class FoldResult:
    fold: int
    n_train: int
    n_test: int
    n_test_positive: int
    risk: float
    auc: Optional[float]
    baseline_risk: float
    single_class_train: bool
    train_end: int
    test_start: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class RiskCell:
    """Risk of one representation under one configuration."""

    representation: str
    model: str
    n_splits: int
    horizon_delta: float
    window: float
    folds: List[FoldResult] = field(default_factory=list)
    skipped_folds: List[int] = field(default_factory=list)
    predictions: List[np.ndarray] = field(default_factory=list, repr=False, compare=False)

    @property
    def key(self) -> CellKey:
        return (self.representation, self.model, self.n_splits, self.horizon_delta, self.window)

    @property
    def risk(self) -> float:
        return float(np.mean([f.risk for f in self.folds])) if self.folds else float("nan")

    @property
    def auc(self) -> Optional[float]:
        values = [f.auc for f in self.folds if f.auc is not None]
        return float(np.mean(values)) if values else None

    @property
    def baseline_risk(self) -> float:
        if not self.folds:
            return float("nan")
        return float(np.mean([f.baseline_risk for f in self.folds]))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "representation": self.representation,
            "model": self.model,
            "n_splits": self.n_splits,
            "horizon_delta": self.horizon_delta,
            "window": self.window,
            "risk": self.risk,
            "auc": self.auc,
            "baseline_risk": self.baseline_risk,
            "folds": [f.to_dict() for f in self.folds],
            "skipped_folds": list(self.skipped_folds),
        }


@dataclass
class ConditionalCell:
    """High-risk conditional dependence between two representations' predictions."""

    model: str
    n_splits: int
    horizon_delta: float
    window: float
    per_fold: List[ConditionalCorrelation]
    pooled: ConditionalCorrelation

    @property
    def mean_correlation(self) -> Optional[float]:
        values = [c.correlation for c in self.per_fold if c.correlation is not None]
        return float(np.mean(values)) if values else None

    @property
    def mean_covariance(self) -> Optional[float]:
        values = [c.covariance for c in self.per_fold if c.covariance is not None]
        return float(np.mean(values)) if values else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model,
            "n_splits": self.n_splits,
            "horizon_delta": self.horizon_delta,
            "window": self.window,
            "mean_correlation": self.mean_correlation,
            "mean_covariance": self.mean_covariance,
            "per_fold": [c.to_dict() for c in self.per_fold],
            "pooled": self.pooled.to_dict(),
        }


@dataclass
class RiskReport:
    cells: List[RiskCell]
    conditional: List[ConditionalCell]
    skipped: List[Dict[str, Any]]
    config: EvaluationConfig
    representations: Tuple[str, ...]

    def cell(
        self, representation: str, model: str, n_splits: int, horizon_delta: float, window: float
    ) -> RiskCell:
        key = (representation, model, int(n_splits), float(horizon_delta), float(window))
        for c in self.cells:
            if c.key == key:
                return c
        raise KeyError(key)

    def cells_for(self, representation: str) -> List[RiskCell]:
        return [c for c in self.cells if c.representation == representation]

    def mean_risk(self, representation: str) -> float:
        risks = [c.risk for c in self.cells_for(representation) if c.folds]
        return float(np.mean(risks)) if risks else float("nan")

    def mean_auc(self, representation: str) -> Optional[float]:
        values = [c.auc for c in self.cells_for(representation) if c.auc is not None]
        return float(np.mean(values)) if values else None

    def summary(self) -> Dict[str, Dict[str, Any]]:
        """Mean risk, AUC and baseline per representation."""
        out = {}
        for name in self.representations:
            baselines = [c.baseline_risk for c in self.cells_for(name) if c.folds]
            out[name] = {
                "risk": self.mean_risk(name),
                "auc": self.mean_auc(name),
                "baseline_risk": float(np.mean(baselines)) if baselines else None,
            }
        return out

    def gaps(self, worse: str = RESIDUAL, better: str = CANONICAL) -> List[Dict[str, Any]]:
        """Per-configuration ``risk(worse) - risk(better)``."""
        rows = []
        for c in sorted(self.cells_for(better), key=lambda c: c.key[1:]):
            other = self.cell(worse, c.model, c.n_splits, c.horizon_delta, c.window)
            rows.append(
                {
                    "model": c.model,
                    "n_splits": c.n_splits,
                    "horizon_delta": c.horizon_delta,
                    "window": c.window,
                    f"risk_{better}": c.risk,
                    f"risk_{worse}": other.risk,
                    "gap": other.risk - c.risk,
                }
            )
        return rows

    def paired_differences(self, a: str, b: str) -> List[float]:
        """Per-fold ``risk(a) - risk(b)`` over every configuration, in sweep order."""
        diffs = []
        for c in sorted(self.cells_for(a), key=lambda c: c.key[1:]):
            other = self.cell(b, c.model, c.n_splits, c.horizon_delta, c.window)
            by_fold = {f.fold: f.risk for f in other.folds}
            diffs.extend(f.risk - by_fold[f.fold] for f in c.folds if f.fold in by_fold)
        return diffs

    def rows(self) -> List[Dict[str, Any]]:
        """One flat row per configuration cell."""
        return [
            {
                "representation": c.representation,
                "model": c.model,
                "n_splits": c.n_splits,
                "horizon_delta": c.horizon_delta,
                "window": c.window,
                "risk": c.risk,
                "auc": c.auc,
                "baseline_risk": c.baseline_risk,
                "n_folds": len(c.folds),
                "n_skipped_folds": len(c.skipped_folds),
            }
            for c in sorted(self.cells, key=lambda c: c.key)
        ]

    def gap_rows(self) -> List[Dict[str, Any]]:
        return self.gaps()

    def risk_auc_rows(self) -> List[Dict[str, Any]]:
        return [
            {k: r[k] for k in ("representation", "model", "n_splits", "horizon_delta", "window", "risk", "auc")}
            for r in self.rows()
        ]

    def conditional_rows(self) -> List[Dict[str, Any]]:
        rows = []
        for c in sorted(self.conditional, key=lambda c: (c.model, c.n_splits, c.horizon_delta, c.window)):
            rows.append(
                {
                    "model": c.model,
                    "n_splits": c.n_splits,
                    "horizon_delta": c.horizon_delta,
                    "window": c.window,
                    "mean_correlation": c.mean_correlation,
                    "mean_covariance": c.mean_covariance,
                    "pooled_correlation": c.pooled.correlation,
                    "pooled_n": c.pooled.n,
                }
            )
        return rows

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config.to_dict(),
            "representations": list(self.representations),
            "summary": self.summary(),
            "cells": [c.to_dict() for c in sorted(self.cells, key=lambda c: c.key)],
            "gaps": self.gaps() if {CANONICAL, RESIDUAL} <= set(self.representations) else [],
            "conditional": [
                c.to_dict()
                for c in sorted(self.conditional, key=lambda c: (c.model, c.n_splits, c.horizon_delta, c.window))
            ],
            "skipped": list(self.skipped),
        }


def _check_alignment(representations: Sequence[Representation]) -> pd.Index:
    if not representations:
        raise ConfigError("at least one representation is required")
    names = [r.name for r in representations]
    if len(set(names)) != len(names):
        raise ConfigError(f"representation names must be unique, got {names}")
    index = representations[0].frame.index
    for rep in representations[1:]:
        if not rep.frame.index.equals(index):
            raise DataError(f"representation {rep.name!r} does not share timestamps with {names[0]!r}")
    return index


def _evaluate_folds(
    rep: Representation, dataset: LabeledDataset, folds: Sequence[Fold], spec: ModelSpec, cell: RiskCell
) -> None:
    X = dataset.X.to_numpy(dtype=float)
    y = dataset.y
    ts = dataset.timestamps
    for fold in folds:
        train, test = fold.train, fold.test
        if len(test) == 0 or len(train) == 0:
            logger.warning("Skipping fold %d of %s: empty train or test range", fold.index, cell.key)
            cell.skipped_folds.append(fold.index)
            cell.predictions.append(np.empty(0))
            continue
        if ts[train.stop - 1] >= ts[test.start]:
            raise DataError(f"fold {fold.index} leaks: training ends at or after the test start")

        X_train, X_test = X[train.start : train.stop], X[test.start : test.stop]
        if rep.projector is not None:
            X_train, X_test = rep.projector(X_train, X_test)
        y_train, y_test = y[train.start : train.stop], y[test.start : test.stop]
        single = is_single_class(y_train)
        if single:
            logger.debug("Single-class training fold %d for %s", fold.index, cell.key)
        p = fit_predict(spec, X_train, y_train, X_test)
        cell.predictions.append(p)
        cell.folds.append(
            FoldResult(
                fold=fold.index,
                n_train=len(train),
                n_test=len(test),
                n_test_positive=int(y_test.sum()),
                risk=log_loss(y_test, p),
                auc=auc(y_test, p),
                baseline_risk=baseline_risk(y_train, y_test),
                single_class_train=single,
                train_end=int(ts[train.stop - 1]),
                test_start=int(ts[test.start]),
            )
        )


def _conditional(
    model: str,
    n_splits: int,
    delta: float,
    window: float,
    canonical: RiskCell,
    residual: RiskCell,
    theta_quantile: float,
) -> ConditionalCell:
    per_fold = [
        conditional_high_risk_corr(pc, pr, theta_quantile)
        for pc, pr in zip(canonical.predictions, residual.predictions)
        if pc.size
    ]
    pooled = conditional_high_risk_corr(
        np.concatenate(canonical.predictions) if canonical.predictions else np.empty(0),
        np.concatenate(residual.predictions) if residual.predictions else np.empty(0),
        theta_quantile,
    )
    return ConditionalCell(model, n_splits, delta, window, per_fold, pooled)


def _grid(config: EvaluationConfig) -> Iterator[Tuple[float, float]]:
    for window in config.windows:
        for delta in config.deltas:
            yield float(window), float(delta)


def evaluate_representations(
    representations: Sequence[Representation],
    faults: FaultLog,
    config: EvaluationConfig,
    *,
    progress: bool = False,
) -> RiskReport:
    """Evaluate every representation on the full sweep grid.

    Labels come from the native timestamps and are aggregated together with
    the features, so every representation sees the same targets and folds.
    When both a ``canonical`` and a ``residual`` representation are present,
    the conditional high-risk correlation of their predictions is computed
    per configuration.
    """
    index = _check_alignment(representations)
    timestamps = index.to_numpy(dtype=np.int64)
    names = tuple(r.name for r in representations)
    paired = CANONICAL in names and RESIDUAL in names

    first, last = int(timestamps[0]), int(timestamps[-1])
    outside = faults.outside(first, last)
    if outside:
        logger.warning("%d fault event(s) fall outside the frame range [%d, %d]", len(outside), first, last)

    bar = None
    if progress and tqdm is not None:
        bar = tqdm(total=config.n_cells, desc="evaluate", unit="cell")

    cells: List[RiskCell] = []
    conditional: List[ConditionalCell] = []
    skipped: List[Dict[str, Any]] = []
    try:
        for window, delta in _grid(config):
            y = label_horizon(timestamps, faults, delta)
            datasets = {
                rep.name: aggregate_frame(rep.frame, y, window, horizon_delta=delta) for rep in representations
            }
            n_rows = len(datasets[names[0]])
            for n_splits in config.n_splits:
                try:
                    folds = time_splits(n_rows, int(n_splits))
                except InsufficientDataError as exc:
                    logger.warning("Skipping n_splits=%d window=%g: %s", n_splits, window, exc)
                    skipped.append(
                        {"n_splits": int(n_splits), "horizon_delta": delta, "window": window, "reason": str(exc)}
                    )
                    if bar is not None:
                        bar.update(len(config.models))
                    continue
                for spec in config.models:
                    by_name = {}
                    for rep in representations:
                        cell = RiskCell(rep.name, spec.kind, int(n_splits), delta, window)
                        _evaluate_folds(rep, datasets[rep.name], folds, spec, cell)
                        cells.append(cell)
                        by_name[rep.name] = cell
                    if paired:
                        conditional.append(
                            _conditional(
                                spec.kind,
                                int(n_splits),
                                delta,
                                window,
                                by_name[CANONICAL],
                                by_name[RESIDUAL],
                                config.theta_quantile,
                            )
                        )
                    if bar is not None:
                        bar.update(1)
    finally:
        if bar is not None:
            bar.close()

    report = RiskReport(cells, conditional, skipped, config, names)
    for name, stats in report.summary().items():
        logger.info("%s: mean risk %.4f, mean AUC %s", name, stats["risk"], stats["auc"])
    return report


def evaluate_decomposition(
    canonical: pd.DataFrame,
    residual: pd.DataFrame,
    faults: FaultLog,
    config: Optional[EvaluationConfig] = None,
    *,
    progress: bool = False,
) -> RiskReport:
    """Compare the canonical and residual spaces on the same folds and models."""
    reps = [
        Representation(CANONICAL, getattr(canonical, "frame", canonical)),
        Representation(RESIDUAL, getattr(residual, "frame", residual)),
    ]
    return evaluate_representations(reps, faults, config or EvaluationConfig(), progress=progress)
