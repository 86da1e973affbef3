"""Per-column normalizations applied after the semantic transform."""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np

from errors import ConfigError, InsufficientDataError
from transforms.semantic import ArrayLike, _as_series

logger = logging.getLogger(__name__)

IQR_FLOOR = 1e-12
STD_FLOOR = 1e-9


class RobustParameters(NamedTuple):
    median: float
    iqr: float
    degenerate: bool


def robust_parameters(series: ArrayLike) -> RobustParameters:
    """Median and inter-quartile range, with linear-interpolation quantiles.

    ``degenerate`` is set when the IQR is below ``1e-12``; robust scaling then
    only shifts the series by its median.
    """
    values = _as_series(series)
    if values.size < 4:
        raise InsufficientDataError(f"robust scaling needs at least 4 samples, got {values.size}")
    q1, med, q3 = np.quantile(values, [0.25, 0.5, 0.75], method="linear")
    iqr = float(q3 - q1)
    return RobustParameters(float(med), iqr, iqr < IQR_FLOOR)


def robust_scale(series: ArrayLike) -> np.ndarray:
    """``(x - median) / IQR``; shift only when the IQR is degenerate."""
    values = _as_series(series)
    params = robust_parameters(values)
    if params.degenerate:
        return values - params.median
    return (values - params.median) / params.iqr


def log1p_normalize(series: ArrayLike) -> np.ndarray:
    """``ln(1 + max(0, x))``."""
    return np.log1p(np.maximum(0.0, _as_series(series)))


def conditional_zscore(series: ArrayLike) -> np.ndarray:
    """Z-score when the population std exceeds ``1e-9``, otherwise unchanged."""
    values = _as_series(series)
    std = float(np.std(values))
    if std <= STD_FLOOR:
        return values.copy()
    return (values - float(np.mean(values))) / std


def normalize(series: ArrayLike, normalization_id: str) -> np.ndarray:
    if normalization_id == "ROBUST":
        return robust_scale(series)
    if normalization_id == "LOG1P":
        return log1p_normalize(series)
    if normalization_id == "ZSCORE_COND":
        return conditional_zscore(series)
    if normalization_id == "NONE":
        return _as_series(series).copy()
    raise ConfigError(f"unknown normalization {normalization_id}")
