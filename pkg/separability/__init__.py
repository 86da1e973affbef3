"""Intra- versus inter-segment correlation analysis.

Use :func:`analyze_segments` for the full report on a transformed canonical
frame and :func:`circular_shift_test` for the temporal perturbation check.
"""

from .correlation import (  # noqa: F401
    IccResult,
    IcorResult,
    PairDependence,
    SegmentCoherence,
    compute_icc,
    compute_icor,
    segment_icc,
    segment_icor,
    spearman_matrix,
    spearman_rho,
)
from .statistics import UTestResult, exact_p_value, mann_whitney_one_sided  # noqa: F401
from .summary import CorrelationReport, analyze_segments, summarize  # noqa: F401
from .perturbation import ShiftResult, circular_shift_test, shift_columns  # noqa: F401

__all__ = [
    "IccResult",
    "IcorResult",
    "PairDependence",
    "SegmentCoherence",
    "compute_icc",
    "compute_icor",
    "segment_icc",
    "segment_icor",
    "spearman_matrix",
    "spearman_rho",
    "UTestResult",
    "exact_p_value",
    "mann_whitney_one_sided",
    "CorrelationReport",
    "analyze_segments",
    "summarize",
    "ShiftResult",
    "circular_shift_test",
    "shift_columns",
]
