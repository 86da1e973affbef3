"""Loading, reshaping and serialising raw telemetry exports.

Raw monitoring exports arrive in *long* format: one row per
``(timestamp, metric, value)`` observation, typically produced by
concatenating the per-metric tables of a time-series database.  The helpers
in this module parse such files, pivot them into a time-aligned *wide*
:class:`pandas.DataFrame` (the ``MetricFrame`` used everywhere else) and
write both shapes back to disk.

A ``MetricFrame`` is a :class:`pandas.DataFrame` whose index is named
``timestamp`` and holds strictly increasing integer seconds since the epoch,
whose columns are unique metric names sorted lexicographically, and whose
cells are floats with ``NaN`` standing for a missing observation.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence, Tuple, Union, overload

import numpy as np
import pandas as pd

from errors import EmptyInputError, FormatError, TemporalOrderError

logger = logging.getLogger(__name__)

LONG_HEADER: Tuple[str, str, str] = ("timestamp", "metric", "value")
TIMESTAMP = "timestamp"


class LongRecord(NamedTuple):
    """A single raw export row."""

    timestamp: int
    metric_name: str
    value: float


@dataclass(frozen=True)
class LoadSummary:
    """Bookkeeping for :func:`load_long_metrics`."""

    n_records: int
    n_skipped: int
    skipped_lines: Tuple[int, ...] = field(default_factory=tuple)


class LongMetrics(Sequence[LongRecord]):
    """Sequence of :class:`LongRecord` backed by a three-column table.

    Keeping the parsed rows in a :class:`pandas.DataFrame` lets the pivot run
    vectorised on exports with millions of rows while still behaving like the
    plain record sequence callers expect.
    """

    def __init__(self, table: pd.DataFrame, summary: LoadSummary | None = None) -> None:
        self.table = table.reset_index(drop=True)
        self.summary = summary or LoadSummary(n_records=len(self.table), n_skipped=0)

    def __len__(self) -> int:
        return len(self.table)

    @overload
    def __getitem__(self, index: int) -> LongRecord: ...

    @overload
    def __getitem__(self, index: slice) -> "LongMetrics": ...

    def __getitem__(self, index):
        if isinstance(index, slice):
            return LongMetrics(self.table.iloc[index])
        row = self.table.iloc[index]
        return LongRecord(int(row[TIMESTAMP]), str(row["metric"]), float(row["value"]))

    def __iter__(self) -> Iterator[LongRecord]:
        for ts, name, value in self.table.itertuples(index=False, name=None):
            yield LongRecord(int(ts), str(name), float(value))

    def __repr__(self) -> str:
        return f"LongMetrics(n_records={len(self)}, n_skipped={self.summary.n_skipped})"


def _records_table(records: Iterable[LongRecord]) -> pd.DataFrame:
    if isinstance(records, LongMetrics):
        return records.table
    rows = [(int(r.timestamp), str(r.metric_name), float(r.value)) for r in records]
    return pd.DataFrame(rows, columns=list(LONG_HEADER)).astype(
        {TIMESTAMP: "int64", "metric": "object", "value": "float64"}
    )


def _blank_row(fields: list) -> list:
    return ["", "", ""]


def load_long_metrics(path: Union[str, os.PathLike]) -> LongMetrics:
    """Parse a long-format CSV export.

    Parameters
    ----------
    path:
        CSV file whose header is exactly ``timestamp,metric,value``.

    Returns
    -------
    LongMetrics
        The parsed records.  Rows whose timestamp or value cannot be parsed,
        whose value is not finite, or whose metric name is empty are skipped;
        their count and 1-based line numbers are available on
        ``result.summary``.
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"Input file does not exist: {path}")

    read_options = dict(dtype=str, keep_default_na=False, encoding="utf-8", skipinitialspace=True)
    try:
        try:
            raw = pd.read_csv(path, **read_options)
        except pd.errors.ParserError:
            # Rows with extra fields: blank them so they are counted as skipped in place.
            raw = pd.read_csv(path, engine="python", on_bad_lines=_blank_row, **read_options)
    except pd.errors.EmptyDataError as exc:
        raise FormatError(f"{path}: empty file, expected header {','.join(LONG_HEADER)}") from exc
    except pd.errors.ParserError as exc:
        raise FormatError(f"{path}: unreadable CSV: {exc}") from exc

    header = tuple(str(c).strip() for c in raw.columns)
    if header != LONG_HEADER:
        raise FormatError(
            f"{path}: expected header {','.join(LONG_HEADER)}, found {','.join(header)}"
        )
    raw.columns = list(LONG_HEADER)

    timestamps = pd.to_numeric(raw[TIMESTAMP].str.strip(), errors="coerce")
    values = pd.to_numeric(raw["value"].str.strip(), errors="coerce")
    names = raw["metric"].str.strip()

    valid = (
        timestamps.notna()
        & np.isfinite(values.to_numpy(dtype=float, na_value=np.nan))
        & (names.str.len() > 0)
    )
    # Integral timestamps only; "10.5" is not a valid export row.
    valid &= timestamps.fillna(0.5) == np.floor(timestamps.fillna(0.5))

    # Header is line 1, first data row is line 2.
    skipped = tuple(int(i) + 2 for i in np.flatnonzero(~valid.to_numpy()))
    table = pd.DataFrame(
        {
            TIMESTAMP: timestamps[valid].astype("int64"),
            "metric": names[valid].astype(object),
            "value": values[valid].astype("float64"),
        }
    )
    summary = LoadSummary(n_records=len(table), n_skipped=len(skipped), skipped_lines=skipped)
    if skipped:
        logger.warning("%s: skipped %d unparseable row(s)", path, len(skipped))
    logger.info("Loaded %d records from %s", summary.n_records, path)
    return LongMetrics(table, summary)


def pivot_to_wide(records: Iterable[LongRecord]) -> pd.DataFrame:
    """Pivot long records into a wide ``MetricFrame``.

    One row per distinct timestamp (ascending), one column per distinct metric
    name (lexicographic).  Absent ``(timestamp, metric)`` pairs become ``NaN``.
    Duplicate pairs resolve to the last occurrence; the number of duplicates is
    stored in ``frame.attrs["n_duplicates"]``.
    """
    table = _records_table(records)
    if table.empty:
        raise EmptyInputError("pivot_to_wide received no records")

    duplicated = table.duplicated(subset=[TIMESTAMP, "metric"], keep="last")
    n_duplicates = int(duplicated.sum())
    if n_duplicates:
        logger.warning("Resolved %d duplicate (timestamp, metric) pair(s), last wins", n_duplicates)
    table = table.loc[~duplicated]

    frame = table.pivot(index=TIMESTAMP, columns="metric", values="value")
    frame = frame.sort_index().reindex(columns=sorted(frame.columns))
    frame.index = frame.index.astype("int64")
    frame.index.name = TIMESTAMP
    frame.columns.name = None
    frame = frame.astype("float64")
    frame.attrs["n_duplicates"] = n_duplicates
    return frame


def frame_to_records(frame: pd.DataFrame) -> LongMetrics:
    """Serialise a ``MetricFrame`` back to long form, omitting missing cells."""
    long = (
        frame.rename_axis(index=TIMESTAMP)
        .reset_index()
        .melt(id_vars=TIMESTAMP, var_name="metric", value_name="value")
        .dropna(subset=["value"])
        .sort_values([TIMESTAMP, "metric"], kind="mergesort")
    )
    long[TIMESTAMP] = long[TIMESTAMP].astype("int64")
    long["value"] = long["value"].astype("float64")
    return LongMetrics(long[list(LONG_HEADER)])


def write_long_csv(records: Iterable[LongRecord], path: Union[str, os.PathLike]) -> None:
    """Write records in the long export layout accepted by :func:`load_long_metrics`."""
    table = _records_table(records)
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    table.to_csv(path, index=False, columns=list(LONG_HEADER), encoding="utf-8")


def write_wide_csv(frame: pd.DataFrame, path: Union[str, os.PathLike]) -> None:
    """Write a frame as wide CSV with ``timestamp`` as the first column."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    frame.to_csv(path, index=True, index_label=TIMESTAMP, encoding="utf-8")


def read_wide_csv(path: Union[str, os.PathLike]) -> pd.DataFrame:
    """Read a wide CSV written by :func:`write_wide_csv` back into a frame."""
    if not os.path.isfile(path):
        raise FileNotFoundError(f"Input file does not exist: {path}")
    try:
        frame = pd.read_csv(path, float_precision="round_trip", encoding="utf-8")
    except pd.errors.EmptyDataError as exc:
        raise FormatError(f"{path}: empty file") from exc
    if len(frame.columns) == 0 or frame.columns[0] != TIMESTAMP:
        raise FormatError(f"{path}: first column must be {TIMESTAMP!r}")
    frame = frame.set_index(TIMESTAMP)
    frame.index = frame.index.astype("int64")
    frame = frame.astype("float64")
    try:
        validate_frame(frame)
    except (FormatError, TemporalOrderError) as exc:
        raise type(exc)(f"{path}: {exc}") from exc
    return frame


def validate_frame(frame: pd.DataFrame) -> None:
    """Check the ``MetricFrame`` invariants, raising on the first violation."""
    if frame.index.has_duplicates or not frame.index.is_monotonic_increasing:
        raise TemporalOrderError("frame timestamps must be strictly increasing")
    if frame.columns.has_duplicates:
        raise FormatError("frame column names must be unique")
    values = frame.to_numpy(dtype=float)
    if np.isinf(values).any():
        raise FormatError("frame holds non-finite values")
