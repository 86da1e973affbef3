"""Exception hierarchy shared by every package of the segmentation toolkit.

Two families matter to callers.  :class:`DataError` signals that the data
handed to an operation cannot be processed (the command line maps it to exit
code 2), while :class:`ConfigError` signals a bad parameter, taxonomy or
command line value (exit code 1).  Both derive from :class:`ValueError` so
generic callers can keep catching the builtin.
"""

from __future__ import annotations

from typing import Optional


class SemsegError(Exception):
    """Base class for all errors raised by this project."""


class DataError(SemsegError, ValueError):
    """The input data violates an operation's precondition."""


class ConfigError(SemsegError, ValueError):
    """A configuration value, taxonomy entry or CLI argument is invalid."""


class FormatError(DataError):
    """A file does not have the expected layout (for example a bad header)."""


class EmptyInputError(DataError):
    """An operation received no records at all."""


class DegenerateFrameError(DataError):
    """Cleaning removed every column of a frame."""


class InsufficientDataError(DataError):
    """A series or frame is too short for the requested operation."""


class DomainError(DataError):
    """A value lies outside the mathematical domain of a transform."""

    def __init__(self, message: str, *, index: Optional[int] = None) -> None:
        super().__init__(message)
        self.index = index


class TemporalOrderError(DataError):
    """Timestamps are not strictly increasing."""


class UndefinedCorrelationError(DataError):
    """A rank correlation was requested for a constant series."""


class EmptyAnalysisError(DataError):
    """No segment holds enough usable features for the analysis."""


class InsufficientSegmentsError(DataError):
    """Fewer than two usable segments are available for inter-segment work."""


class EmptyCanonicalError(DataError):
    """No frame column matched any canonical segment pattern."""


class ColumnTransformError(DataError):
    """A per-column transform failed; carries the offending column name."""

    def __init__(self, column: str, cause: Exception) -> None:
        super().__init__(f"column {column!r}: {cause}")
        self.column = column
        self.cause = cause


__all__ = [
    "SemsegError",
    "DataError",
    "ConfigError",
    "FormatError",
    "EmptyInputError",
    "DegenerateFrameError",
    "InsufficientDataError",
    "DomainError",
    "TemporalOrderError",
    "UndefinedCorrelationError",
    "EmptyAnalysisError",
    "InsufficientSegmentsError",
    "EmptyCanonicalError",
    "ColumnTransformError",
]
