"""Route every assigned column through its group's transform and normalization."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from errors import ColumnTransformError, DataError, InsufficientDataError
from taxonomy.assign import CANONICAL, RESIDUAL, SegmentedSpace
from taxonomy.schema import GroupSpec, SegmentTaxonomy
from transforms.normalize import normalize, robust_parameters
from transforms.residual import residual_transform
from transforms.semantic import RollingBaseline, apply_semantic, transform_warmup

logger = logging.getLogger(__name__)


@dataclass
class TransformedFrame:
    """A transformed, time-aligned frame plus per-column provenance."""

    frame: pd.DataFrame
    provenance: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    @property
    def columns(self) -> List[str]:
        return [str(c) for c in self.frame.columns]

    @property
    def index(self) -> pd.Index:
        return self.frame.index

    @property
    def shape(self) -> Tuple[int, int]:
        return self.frame.shape

    def degenerate_columns(self) -> List[str]:
        """Columns whose robust scaling fell back to a zero IQR."""
        return [c for c, p in self.provenance.items() if p.get("degenerate_iqr")]


def _plan(space: SegmentedSpace, taxonomy: SegmentTaxonomy) -> List[Tuple[str, str, GroupSpec]]:
    plan: List[Tuple[str, str, GroupSpec]] = []
    for spec in taxonomy.canonical_segments:
        plan.extend((CANONICAL, column, spec) for column in space.canonical.get(spec.name, []))
    for spec in taxonomy.residual_families:
        plan.extend((RESIDUAL, column, spec) for column in space.residual.get(spec.name, []))
    return plan


def apply_pipeline(
    frame: pd.DataFrame,
    space: SegmentedSpace,
    taxonomy: SegmentTaxonomy,
    baseline: Optional[RollingBaseline] = None,
) -> Tuple[TransformedFrame, TransformedFrame]:
    """Transform the canonical and residual spaces of a cleaned frame.

    Each column goes through its group's semantic (or residual) transform.
    All columns of both spaces are then trimmed to the largest warmup among
    the transforms in use, so both outputs share one timestamp index, and only
    then normalized.  Unmatched columns are left out.

    Returns
    -------
    tuple
        ``(canonical, residual)`` :class:`TransformedFrame` objects.

    Raises
    ------
    ColumnTransformError
        Wraps the first per-column failure with the column name.
    """
    baseline = baseline or RollingBaseline()
    plan = _plan(space, taxonomy)
    timestamps = frame.index.to_numpy()

    max_warmup = max((transform_warmup(spec.transform, baseline) for _, _, spec in plan), default=0)
    n_rows = len(frame.index) - max_warmup
    if plan and n_rows < 1:
        raise InsufficientDataError(
            f"{len(frame.index)} row(s) cannot cover a warmup of {max_warmup} sample(s)"
        )
    out_index = frame.index[max_warmup:]

    columns: Dict[str, Dict[str, np.ndarray]] = {CANONICAL: {}, RESIDUAL: {}}
    provenance: Dict[str, Dict[str, Dict[str, Any]]] = {CANONICAL: {}, RESIDUAL: {}}
    for space_name, column, spec in plan:
        raw = frame[column].to_numpy(dtype=float)
        try:
            if space_name == CANONICAL:
                transformed = apply_semantic(spec.transform, raw, timestamps, baseline)
            else:
                transformed = residual_transform(raw, spec.transform)
            # End-aligned: drop from the front only.
            aligned = transformed[len(transformed) - n_rows :]
            degenerate = spec.normalization == "ROBUST" and robust_parameters(aligned).degenerate
            values = normalize(aligned, spec.normalization)
        except ColumnTransformError:
            raise
        except DataError as exc:
            raise ColumnTransformError(column, exc) from exc

        if degenerate:
            logger.warning("Column %s has a degenerate IQR; robust scaling only shifted it", column)
        columns[space_name][column] = values
        provenance[space_name][column] = {
            "space": space_name,
            "group": spec.name,
            "transform": spec.transform,
            "normalization": spec.normalization,
            "window": baseline.window if spec.transform in ("BSR", "RBDR") else None,
            "epsilon": baseline.epsilon if spec.transform in ("BSR", "GBD", "RBDR") else None,
            "warmup": transform_warmup(spec.transform, baseline),
            "degenerate_iqr": bool(degenerate),
        }

    def _build(space_name: str) -> TransformedFrame:
        data = pd.DataFrame(columns[space_name], index=out_index, dtype="float64")
        data.index.name = frame.index.name
        return TransformedFrame(data, provenance[space_name])

    canonical, residual = _build(CANONICAL), _build(RESIDUAL)
    logger.info(
        "Transformed %d canonical and %d residual column(s) over %d aligned row(s)",
        canonical.shape[1],
        residual.shape[1],
        len(out_index),
    )
    return canonical, residual
