"""Helpers for turning raw telemetry exports into clean wide frames.

This package parses long-format ``timestamp,metric,value`` exports, pivots
them into a time-aligned wide frame and cleans that frame (missing-value
filling, sparse and constant column removal).  Functions here never apply
semantic transforms; that is the job of :mod:`transforms`.
"""

from .cleaning import CleaningSummary, clean_frame  # noqa: F401
from .loader import (  # noqa: F401
    LoadSummary,
    LongMetrics,
    LongRecord,
    frame_to_records,
    load_long_metrics,
    pivot_to_wide,
    read_wide_csv,
    validate_frame,
    write_long_csv,
    write_wide_csv,
)

__all__ = [
    "CleaningSummary",
    "LoadSummary",
    "LongMetrics",
    "LongRecord",
    "clean_frame",
    "frame_to_records",
    "load_long_metrics",
    "pivot_to_wide",
    "read_wide_csv",
    "validate_frame",
    "write_long_csv",
    "write_wide_csv",
]
