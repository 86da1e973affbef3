"""Micro and macro separability statistics and the combined correlation report."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from separability.correlation import (
    FrameLike,
    IccResult,
    IcorResult,
    PairDependence,
    SegmentCoherence,
    SegmentMap,
    segment_icc,
    segment_icor,
    spearman_matrix,
)
from separability.statistics import UTestResult, mann_whitney_one_sided

logger = logging.getLogger(__name__)


@dataclass
class CorrelationReport:
    """Separability of a segmented space.

    ``delta`` is ``icc_micro - icor_micro``.  When fewer than two segments are
    usable the inter-segment fields are ``None`` and ``partial`` is set.
    """

    per_segment_icc: Dict[str, SegmentCoherence]
    icor_pairs: Dict[Tuple[str, str], PairDependence]
    icc_micro: float
    icc_macro: float
    icor_micro: Optional[float]
    icor_macro: Optional[float]
    delta: Optional[float]
    utest: Optional[UTestResult]
    omega_in: List[float] = field(default_factory=list)
    omega_out: List[float] = field(default_factory=list)
    excluded: Dict[str, str] = field(default_factory=dict)
    partial: bool = False

    def segment_bars(self) -> List[Dict[str, Any]]:
        """One row per segment: its ICC next to the global ICOR_micro."""
        return [
            {"segment": name, "icc": c.icc, "n_pairs": c.n_pairs, "icor_micro": self.icor_micro}
            for name, c in self.per_segment_icc.items()
        ]

    def omegas_frame(self) -> pd.DataFrame:
        """Long table of the pooled pair-level correlations, one row per pair."""
        return pd.DataFrame(
            {
                "distribution": ["in"] * len(self.omega_in) + ["out"] * len(self.omega_out),
                "rho": list(self.omega_in) + list(self.omega_out),
            }
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "per_segment_icc": {
                name: {"icc": c.icc, "n_pairs": c.n_pairs, "median": c.median}
                for name, c in self.per_segment_icc.items()
            },
            "icor_pairs": [
                {"segment_a": a, "segment_b": b, "icor": p.icor, "n_pairs": p.n_pairs, "median": p.median}
                for (a, b), p in self.icor_pairs.items()
            ],
            "icc_micro": self.icc_micro,
            "icc_macro": self.icc_macro,
            "icor_micro": self.icor_micro,
            "icor_macro": self.icor_macro,
            "delta": self.delta,
            "utest": self.utest.to_dict() if self.utest else None,
            "n_in": len(self.omega_in),
            "n_out": len(self.omega_out),
            "excluded": dict(self.excluded),
            "partial": self.partial,
        }


def summarize(icc: IccResult, icor: Optional[IcorResult] = None) -> CorrelationReport:
    """Combine ICC and ICOR data into a report.

    Micro statistics are means of the pooled pair-level correlations, macro
    statistics are means of the per-segment (or per-pair) averages.
    """
    icc_micro = float(np.mean(icc.omega_in))
    icc_macro = float(np.mean([c.icc for c in icc.per_segment.values()]))

    if icor is None or not icor.omega_out:
        logger.warning("Fewer than two usable segments; inter-segment statistics omitted")
        return CorrelationReport(
            per_segment_icc=dict(icc.per_segment),
            icor_pairs={},
            icc_micro=icc_micro,
            icc_macro=icc_macro,
            icor_micro=None,
            icor_macro=None,
            delta=None,
            utest=None,
            omega_in=list(icc.omega_in),
            excluded=dict(icc.excluded),
            partial=True,
        )

    icor_micro = float(np.mean(icor.omega_out))
    icor_macro = float(np.mean([p.icor for p in icor.per_pair.values()]))
    return CorrelationReport(
        per_segment_icc=dict(icc.per_segment),
        icor_pairs=dict(icor.per_pair),
        icc_micro=icc_micro,
        icc_macro=icc_macro,
        icor_micro=icor_micro,
        icor_macro=icor_macro,
        delta=icc_micro - icor_micro,
        utest=mann_whitney_one_sided(icc.omega_in, icor.omega_out),
        omega_in=list(icc.omega_in),
        omega_out=list(icor.omega_out),
        excluded=dict(icc.excluded),
    )


def analyze_segments(frame: FrameLike, segments: SegmentMap) -> CorrelationReport:
    """ICC, ICOR, their summary and the U test in one call.

    The same routine runs before and after pruning so both reports share the
    exact methodology.
    """
    columns = [c for cols in segments.values() for c in cols]
    rho, _ = spearman_matrix(frame, columns)
    icc = segment_icc(rho, segments)
    usable_segments = [
        name for name, cols in segments.items() if any(not np.isnan(rho.at[c, c]) for c in cols)
    ]
    icor = segment_icor(rho, segments) if len(usable_segments) >= 2 else None
    report = summarize(icc, icor)
    logger.info(
        "ICC_micro=%.4f ICOR_micro=%s over %d segment(s)",
        report.icc_micro,
        "n/a" if report.icor_micro is None else f"{report.icor_micro:.4f}",
        len(report.per_segment_icc),
    )
    return report
