"""Spearman correlation structure inside and across canonical segments."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import TYPE_CHECKING, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.stats import rankdata

from errors import (
    EmptyAnalysisError,
    InsufficientDataError,
    InsufficientSegmentsError,
    UndefinedCorrelationError,
)

if TYPE_CHECKING:
    from transforms.dispatcher import TransformedFrame

logger = logging.getLogger(__name__)

SegmentMap = Mapping[str, Sequence[str]]
FrameLike = Union[pd.DataFrame, "TransformedFrame"]


def _frame(frame: FrameLike) -> pd.DataFrame:
    return getattr(frame, "frame", frame)


def spearman_rho(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation of the average ranks of ``x`` and ``y``.

    Raises
    ------
    InsufficientDataError
        If the lengths differ or are below 3.
    UndefinedCorrelationError
        If either sequence is constant.
    """
    a = np.asarray(x, dtype=float)
    b = np.asarray(y, dtype=float)
    if a.shape != b.shape or a.size < 3:
        raise InsufficientDataError(
            f"spearman_rho needs two sequences of equal length >= 3, got {a.size} and {b.size}"
        )
    if np.all(a == a[0]) or np.all(b == b[0]):
        raise UndefinedCorrelationError("rank correlation is undefined for a constant sequence")
    rho = np.corrcoef(rankdata(a, method="average"), rankdata(b, method="average"))[0, 1]
    return float(np.clip(rho, -1.0, 1.0))


def spearman_matrix(
    frame: FrameLike, columns: Optional[Sequence[str]] = None
) -> Tuple[pd.DataFrame, List[str]]:
    """Spearman matrix of ``columns`` (all columns by default).

    Returns the matrix and the list of constant columns.  Rows and columns of
    constant features are ``NaN``.
    """
    data = _frame(frame)
    columns = list(data.columns if columns is None else columns)
    values = data[columns].to_numpy(dtype=float)
    if values.shape[0] < 3:
        raise InsufficientDataError(f"spearman_matrix needs at least 3 rows, got {values.shape[0]}")

    ranks = rankdata(values, method="average", axis=0)
    centred = ranks - ranks.mean(axis=0)
    norms = np.sqrt((centred**2).sum(axis=0))
    constant = [c for c, n in zip(columns, norms) if n == 0]
    with np.errstate(invalid="ignore", divide="ignore"):
        unit = centred / norms
        rho = np.clip(unit.T @ unit, -1.0, 1.0)
    usable = norms > 0
    rho[~usable, :] = np.nan
    rho[:, ~usable] = np.nan
    np.fill_diagonal(rho, np.where(usable, 1.0, np.nan))
    return pd.DataFrame(rho, index=columns, columns=columns), constant


@dataclass(frozen=True)
class SegmentCoherence:
    icc: float
    n_pairs: int
    median: float


@dataclass(frozen=True)
class PairDependence:
    icor: float
    n_pairs: int
    median: float


@dataclass
class IccResult:
    per_segment: Dict[str, SegmentCoherence]
    omega_in: List[float]
    excluded: Dict[str, str] = field(default_factory=dict)
    constant_features: List[str] = field(default_factory=list)


@dataclass
class IcorResult:
    per_pair: Dict[Tuple[str, str], PairDependence]
    omega_out: List[float]


def _mean(values: Sequence[float]) -> float:
    return float(np.mean(values)) if len(values) else float("nan")


def _usable(rho: pd.DataFrame, segments: SegmentMap) -> Tuple[Dict[str, List[str]], List[str]]:
    constant = [c for c in rho.columns if np.isnan(rho.at[c, c])]
    dropped = set(constant)
    return {name: [c for c in cols if c not in dropped] for name, cols in segments.items()}, constant


def segment_icc(rho: pd.DataFrame, segments: SegmentMap) -> IccResult:
    """Aggregate a Spearman matrix into per-segment ICC and the pooled Ω_in.

    ``rho`` must cover every feature of ``segments``; a ``NaN`` diagonal entry
    marks a constant feature, whose pairs are skipped.  Segments left with
    fewer than two usable features are excluded and listed in ``excluded``.
    """
    usable, constant = _usable(rho, segments)
    if constant:
        logger.warning(
            "Skipping pairs of %d constant feature(s): %s", len(constant), ", ".join(map(str, constant))
        )

    per_segment: Dict[str, SegmentCoherence] = {}
    omega_in: List[float] = []
    excluded: Dict[str, str] = {}
    for name, cols in usable.items():
        if len(cols) < 2:
            excluded[name] = f"{len(cols)} usable feature(s), need 2"
            logger.info("Segment %s excluded from ICC: %s", name, excluded[name])
            continue
        values = [float(rho.at[a, b]) for a, b in combinations(cols, 2)]
        per_segment[name] = SegmentCoherence(_mean(values), len(values), float(np.median(values)))
        omega_in.extend(values)

    if not per_segment:
        raise EmptyAnalysisError("no segment has two usable features")
    return IccResult(per_segment, omega_in, excluded, [str(c) for c in constant])


def segment_icor(rho: pd.DataFrame, segments: SegmentMap) -> IcorResult:
    """Aggregate a Spearman matrix into per-pair ICOR and the pooled Ω_out.

    Every segment with at least one usable feature takes part.
    """
    usable, _ = _usable(rho, segments)
    names = [name for name, cols in usable.items() if cols]
    if len(names) < 2:
        raise InsufficientSegmentsError(
            f"inter-segment correlation needs 2 usable segments, got {len(names)}"
        )

    per_pair: Dict[Tuple[str, str], PairDependence] = {}
    omega_out: List[float] = []
    for a, b in combinations(names, 2):
        values = [float(rho.at[fa, fb]) for fa in usable[a] for fb in usable[b]]
        per_pair[(a, b)] = PairDependence(_mean(values), len(values), float(np.median(values)))
        omega_out.extend(values)
    return IcorResult(per_pair, omega_out)


def _segment_matrix(frame: FrameLike, segments: SegmentMap) -> pd.DataFrame:
    columns = [c for cols in segments.values() for c in cols]
    if not columns:
        return pd.DataFrame(dtype=float)
    rho, _ = spearman_matrix(frame, columns)
    return rho


def compute_icc(frame: FrameLike, segments: SegmentMap) -> IccResult:
    """Per-segment intra-segment correlation of a transformed frame."""
    return segment_icc(_segment_matrix(frame, segments), segments)


def compute_icor(frame: FrameLike, segments: SegmentMap) -> IcorResult:
    """Per-pair inter-segment correlation of a transformed frame."""
    return segment_icor(_segment_matrix(frame, segments), segments)
