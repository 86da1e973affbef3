"""Missing-value treatment and degenerate-column removal.

Cleaning turns a freshly pivoted ``MetricFrame`` into a complete matrix that
the semantic transforms can consume.  All steps are column-local: dropping or
filling one column never changes the values of another.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Collection, Dict, Tuple

import numpy as np
import pandas as pd

from errors import ConfigError, DegenerateFrameError, InsufficientDataError

logger = logging.getLogger(__name__)

HIGH_MISSING = "high_missing"
ZERO_VARIANCE = "zero_variance"


@dataclass(frozen=True)
class CleaningSummary:
    """What :func:`clean_frame` did to a frame."""

    n_columns_in: int
    n_columns_out: int
    dropped: Dict[str, str] = field(default_factory=dict)
    filled_cells: int = 0
    sentinel_cells: int = 0

    def to_dict(self) -> dict:
        return {
            "n_columns_in": self.n_columns_in,
            "n_columns_out": self.n_columns_out,
            "dropped": dict(sorted(self.dropped.items())),
            "filled_cells": self.filled_cells,
            "sentinel_cells": self.sentinel_cells,
        }


def clean_frame(
    frame: pd.DataFrame,
    max_missing_fraction: float = 0.5,
    *,
    sentinels: Collection[float] = (),
) -> Tuple[pd.DataFrame, CleaningSummary]:
    """Complete a frame by dropping sparse columns and filling the rest.

    Parameters
    ----------
    frame:
        A ``MetricFrame`` with at least two rows; ``NaN`` marks missing cells.
    max_missing_fraction:
        Columns whose fraction of missing cells is strictly greater than this
        value are dropped.
    sentinels:
        Values that exporters use to mean "unavailable" (for example ``-1``).
        Cells equal to a sentinel are treated as missing before anything else.

    Returns
    -------
    tuple
        The cleaned frame and a :class:`CleaningSummary`.

    Notes
    -----
    Remaining gaps are filled backwards (each gap takes the next observed value
    of its column); a trailing gap with no later observation is filled forwards
    from the last observed value.  Columns whose values are then all exactly
    equal are dropped as zero-variance.
    """
    if not 0.0 <= max_missing_fraction <= 1.0:
        raise ConfigError(f"max_missing_fraction must lie in [0, 1], got {max_missing_fraction}")
    if len(frame.index) < 2:
        raise InsufficientDataError(f"cleaning needs at least 2 rows, got {len(frame.index)}")

    work = frame.astype("float64")
    n_sentinel = 0
    if sentinels:
        sentinel_mask = work.isin(list(sentinels))
        n_sentinel = int(sentinel_mask.to_numpy().sum())
        work = work.mask(sentinel_mask)

    dropped: Dict[str, str] = {}
    missing_fraction = work.isna().mean(axis=0)
    for column, fraction in missing_fraction.items():
        if fraction > max_missing_fraction:
            dropped[str(column)] = HIGH_MISSING
    work = work.drop(columns=list(dropped))

    n_filled = int(work.isna().to_numpy().sum())
    work = work.bfill().ffill()

    for column in work.columns:
        values = work[column].to_numpy()
        # Exact equality; counters are exact so no tolerance is applied.
        if np.isnan(values).all() or (values == values[0]).all():
            dropped[str(column)] = ZERO_VARIANCE
    work = work.drop(columns=[c for c in work.columns if str(c) in dropped])

    if work.shape[1] == 0:
        raise DegenerateFrameError(
            f"cleaning dropped all {frame.shape[1]} column(s): nothing left to analyse"
        )

    summary = CleaningSummary(
        n_columns_in=int(frame.shape[1]),
        n_columns_out=int(work.shape[1]),
        dropped=dropped,
        filled_cells=n_filled,
        sentinel_cells=n_sentinel,
    )
    logger.info(
        "Cleaning kept %d of %d column(s), filled %d cell(s)",
        summary.n_columns_out,
        summary.n_columns_in,
        n_filled,
    )
    work.attrs = dict(frame.attrs)
    return work, summary
