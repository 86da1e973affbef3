"""Segment-specific semantic transforms.

Each transform turns the raw observations of one canonical segment into a
quantity that carries the segment's operational meaning.  The number after
each formula is the warmup, the count of leading samples without output::

    MCR      max(0, x_t - x_{t-1})                                1
    LTC      ln(1 + x_t)                                          0
    BSR      x_t / (rolling_median_t + eps)                       w - 1
    NETRATE  max(0, x_t - x_{t-1}) / (ts_t - ts_{t-1})            1
    GBD      (x_t - median) / (abs(median) + eps)                 0
    RBDR     (x_t - rolling_median_t) / (rolling_median_t + eps)  w - 1

Outputs are end-aligned with the input: the last output value always belongs
to the last input timestamp, and the first ``warmup`` input samples have no
output.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd

from config import SEMSEG_EPSILON, SEMSEG_WINDOW
from errors import ConfigError, DomainError, InsufficientDataError, TemporalOrderError

logger = logging.getLogger(__name__)

ArrayLike = Union[Sequence[float], np.ndarray]


@dataclass(frozen=True)
class RollingBaseline:
    """Window and stabiliser shared by the rolling-median transforms."""

    window: int = SEMSEG_WINDOW
    epsilon: float = SEMSEG_EPSILON

    def __post_init__(self) -> None:
        if int(self.window) != self.window or self.window < 2:
            raise ConfigError(f"rolling window must be an integer >= 2, got {self.window}")
        if not np.isfinite(self.epsilon) or self.epsilon < 0:
            raise ConfigError(f"epsilon must be finite and non-negative, got {self.epsilon}")


def _as_series(series: ArrayLike) -> np.ndarray:
    values = np.asarray(series, dtype=float)
    if values.ndim != 1:
        raise DomainError(f"expected a 1-D series, got shape {values.shape}")
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise DomainError(f"non-finite value at index {int(bad[0])}", index=int(bad[0]))
    return values


def _require_length(values: np.ndarray, minimum: int, what: str) -> None:
    if values.size < minimum:
        raise InsufficientDataError(f"{what} needs at least {minimum} samples, got {values.size}")


def _safe_divide(numerator: np.ndarray, denominator: np.ndarray, what: str) -> np.ndarray:
    zero = np.flatnonzero(denominator == 0)
    if zero.size:
        # Only reachable with epsilon == 0.
        raise DomainError(f"{what}: zero baseline at index {int(zero[0])}", index=int(zero[0]))
    return numerator / denominator


def rolling_median(series: ArrayLike, window: int) -> np.ndarray:
    """Trailing median over ``window`` samples, defined from index ``window - 1`` on."""
    values = _as_series(series)
    _require_length(values, window, "rolling median")
    return pd.Series(values).rolling(window, min_periods=window).median().to_numpy()[window - 1 :]


def transform_mcr(series: ArrayLike) -> np.ndarray:
    """Monotonic counter rate: clipped first difference."""
    values = _as_series(series)
    _require_length(values, 2, "MCR")
    return np.maximum(0.0, np.diff(values))


def transform_ltc(series: ArrayLike) -> np.ndarray:
    """Latency tail compression, ``ln(1 + x)``."""
    values = _as_series(series)
    negative = np.flatnonzero(values < 0)
    if negative.size:
        i = int(negative[0])
        raise DomainError(f"LTC needs non-negative values, got {values[i]} at index {i}", index=i)
    return np.log1p(values)


def transform_bsr(series: ArrayLike, baseline: Optional[RollingBaseline] = None) -> np.ndarray:
    """Baseline stress ratio against a trailing rolling median."""
    baseline = baseline or RollingBaseline()
    values = _as_series(series)
    _require_length(values, baseline.window, "BSR")
    med = rolling_median(values, baseline.window)
    return _safe_divide(values[baseline.window - 1 :], med + baseline.epsilon, "BSR")


def transform_network_rate(series: ArrayLike, timestamps: ArrayLike) -> np.ndarray:
    """Clipped first difference divided by the elapsed seconds."""
    values = _as_series(series)
    ts = np.asarray(timestamps, dtype=float)
    if ts.shape != values.shape:
        raise DomainError(f"{values.size} values but {ts.size} timestamps")
    _require_length(values, 2, "NETRATE")
    dt = np.diff(ts)
    if (dt <= 0).any():
        i = int(np.flatnonzero(dt <= 0)[0]) + 1
        raise TemporalOrderError(f"timestamps must be strictly increasing (index {i})")
    return np.maximum(0.0, np.diff(values)) / dt


def transform_gbd(series: ArrayLike, epsilon: float = SEMSEG_EPSILON) -> np.ndarray:
    """Global baseline deviation, relative to the series median."""
    values = _as_series(series)
    _require_length(values, 1, "GBD")
    med = float(np.median(values))
    denominator = abs(med) + epsilon
    if denominator == 0:
        if np.all(values == med):
            return np.zeros_like(values)
        raise DomainError("GBD: zero median with epsilon 0")
    return (values - med) / denominator


def transform_rbdr(series: ArrayLike, baseline: Optional[RollingBaseline] = None) -> np.ndarray:
    """Rolling baseline drift ratio."""
    baseline = baseline or RollingBaseline()
    values = _as_series(series)
    _require_length(values, baseline.window, "RBDR")
    med = rolling_median(values, baseline.window)
    tail = values[baseline.window - 1 :]
    numerator = tail - med
    denominator = med + baseline.epsilon
    # No deviation means no drift, even when the baseline is zero.
    denominator = np.where(numerator == 0, 1.0, denominator)
    return _safe_divide(numerator, denominator, "RBDR")


def transform_warmup(transform_id: str, baseline: Optional[RollingBaseline] = None) -> int:
    """Number of leading samples a transform consumes without emitting output."""
    baseline = baseline or RollingBaseline()
    if transform_id in ("MCR", "NETRATE", "RESID_DIFF"):
        return 1
    if transform_id in ("BSR", "RBDR"):
        return baseline.window - 1
    return 0


def apply_semantic(
    transform_id: str,
    series: ArrayLike,
    timestamps: ArrayLike,
    baseline: Optional[RollingBaseline] = None,
) -> np.ndarray:
    """Dispatch a canonical transform id to its implementation."""
    baseline = baseline or RollingBaseline()
    if transform_id == "MCR":
        return transform_mcr(series)
    if transform_id == "LTC":
        return transform_ltc(series)
    if transform_id == "BSR":
        return transform_bsr(series, baseline)
    if transform_id == "NETRATE":
        return transform_network_rate(series, timestamps)
    if transform_id == "GBD":
        return transform_gbd(series, baseline.epsilon)
    if transform_id == "RBDR":
        return transform_rbdr(series, baseline)
    raise ConfigError(f"unknown transform {transform_id}")
