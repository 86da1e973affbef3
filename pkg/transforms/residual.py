"""Lightweight treatments for the residual feature families.

Residual metrics are grouped by statistical behaviour, not operational
meaning, so each family only gets a mild transform and normalization:

* ``RESID_SQRT`` (ratio & bounded): square root then conditional z-score.
  A constant series is passed through untouched.
* ``RESID_LOG1P`` (size & volume): ``ln(1 + x)`` then robust scaling.
* ``RESID_DIFF`` (weak dynamic): unclipped first difference divided by its
  largest magnitude when that is positive.
* ``RESID_NONE`` (monitoring): identity.
"""

from __future__ import annotations

import logging
from typing import Dict, Optional, Union

import numpy as np

from errors import ConfigError, DomainError, InsufficientDataError
from taxonomy.schema import GroupSpec
from transforms.normalize import STD_FLOOR, normalize
from transforms.semantic import ArrayLike, _as_series

logger = logging.getLogger(__name__)

#: Normalization used when a family is named by transform id alone.
DEFAULT_NORMALIZATION: Dict[str, str] = {
    "RESID_SQRT": "ZSCORE_COND",
    "RESID_LOG1P": "ROBUST",
    "RESID_DIFF": "NONE",
    "RESID_NONE": "NONE",
}

FAMILY_TRANSFORMS: Dict[str, str] = {
    "Ratio & bounded": "RESID_SQRT",
    "Size & volume": "RESID_LOG1P",
    "Weak dynamic": "RESID_DIFF",
    "Monitoring": "RESID_NONE",
}


def _require_non_negative(values: np.ndarray, what: str) -> None:
    negative = np.flatnonzero(values < 0)
    if negative.size:
        i = int(negative[0])
        raise DomainError(f"{what} needs non-negative values, got {values[i]} at index {i}", index=i)


def residual_transform(series: ArrayLike, transform_id: str) -> np.ndarray:
    """Apply only the transform half of a residual family treatment."""
    values = _as_series(series)
    if transform_id == "RESID_NONE":
        return values.copy()
    if transform_id == "RESID_SQRT":
        _require_non_negative(values, "RESID_SQRT")
        if float(np.std(values)) <= STD_FLOOR:
            return values.copy()
        return np.sqrt(values)
    if transform_id == "RESID_LOG1P":
        _require_non_negative(values, "RESID_LOG1P")
        return np.log1p(values)
    if transform_id == "RESID_DIFF":
        if values.size < 2:
            raise InsufficientDataError(f"RESID_DIFF needs at least 2 samples, got {values.size}")
        diff = np.diff(values)
        peak = float(np.max(np.abs(diff)))
        return diff / peak if peak > 0 else diff
    raise ConfigError(f"unknown transform {transform_id}")


def _resolve(family: Union[GroupSpec, str], normalization_id: Optional[str]) -> tuple[str, str]:
    if isinstance(family, GroupSpec):
        return family.transform, normalization_id or family.normalization
    transform_id = FAMILY_TRANSFORMS.get(family, family)
    if transform_id not in DEFAULT_NORMALIZATION:
        raise ConfigError(f"unknown residual family {family}")
    return transform_id, normalization_id or DEFAULT_NORMALIZATION[transform_id]


def transform_residual(
    series: ArrayLike,
    family: Union[GroupSpec, str],
    normalization_id: Optional[str] = None,
) -> np.ndarray:
    """Transform then normalize one residual column.

    Parameters
    ----------
    series:
        Raw column values.
    family:
        A taxonomy :class:`~taxonomy.schema.GroupSpec`, a family name of the
        bundled taxonomy (``"Monitoring"``), or a ``RESID_*`` transform id.
    normalization_id:
        Overrides the family's normalization.
    """
    transform_id, norm = _resolve(family, normalization_id)
    return normalize(residual_transform(series, transform_id), norm)
