"""Fault logs, horizon labels and window aggregation."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from errors import ConfigError, FormatError, InsufficientDataError

logger = logging.getLogger(__name__)

FAULT_HEADER: Tuple[str, str] = ("timestamp", "magnitude")


class FaultEvent(NamedTuple):
    timestamp: int
    magnitude: Optional[float] = None


@dataclass(frozen=True)
class FaultLog:
    """Confirmed fault events sorted by time."""

    events: Tuple[FaultEvent, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.events, key=lambda e: e.timestamp))
        object.__setattr__(self, "events", ordered)

    @classmethod
    def from_timestamps(cls, timestamps: Iterable[int]) -> "FaultLog":
        return cls(tuple(FaultEvent(int(t)) for t in timestamps))

    def times(self) -> np.ndarray:
        return np.asarray([e.timestamp for e in self.events], dtype=np.int64)

    def __len__(self) -> int:
        return len(self.events)

    def outside(self, start: int, end: int) -> List[FaultEvent]:
        """Events falling outside ``[start, end]``."""
        return [e for e in self.events if not start <= e.timestamp <= end]


def _parse_times(raw: pd.Series, path: Union[str, os.PathLike]) -> pd.Series:
    numeric = pd.to_numeric(raw, errors="coerce")
    if numeric.notna().all():
        return numeric.astype("int64")
    # ISO-8601 instants are accepted too; naive times are read as UTC.
    parsed = pd.to_datetime(raw, utc=True, errors="coerce")
    if parsed.isna().any():
        bad = int(np.flatnonzero(parsed.isna().to_numpy())[0]) + 2
        raise FormatError(f"{path}: unparseable fault timestamp on line {bad}")
    return (parsed - pd.Timestamp(0, tz="UTC")) // pd.Timedelta(seconds=1)


def load_fault_log(path: Union[str, os.PathLike]) -> FaultLog:
    """Read a ``timestamp,magnitude`` CSV (magnitude may be empty)."""
    if not os.path.isfile(path):
        raise FileNotFoundError(f"Fault log does not exist: {path}")
    try:
        raw = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError as exc:
        raise FormatError(f"{path}: empty fault log") from exc
    header = tuple(str(c).strip() for c in raw.columns)
    if header[:1] != FAULT_HEADER[:1]:
        raise FormatError(f"{path}: expected header {','.join(FAULT_HEADER)}, found {','.join(header)}")

    times = _parse_times(raw.iloc[:, 0].str.strip(), path)
    if len(raw.columns) > 1:
        magnitudes = pd.to_numeric(raw.iloc[:, 1].str.strip(), errors="coerce")
    else:
        magnitudes = pd.Series([np.nan] * len(raw))
    events = tuple(
        FaultEvent(int(t), None if pd.isna(m) else float(m)) for t, m in zip(times, magnitudes)
    )
    log = FaultLog(events)
    if not log.events:
        logger.warning("%s holds no fault events", path)
    logger.info("Loaded %d fault event(s) from %s", len(log), path)
    return log


def write_fault_log(log: FaultLog, path: Union[str, os.PathLike]) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    table = pd.DataFrame(
        {
            "timestamp": [e.timestamp for e in log.events],
            "magnitude": [e.magnitude for e in log.events],
        },
        columns=list(FAULT_HEADER),
    )
    table.to_csv(path, index=False, encoding="utf-8")


def label_horizon(timestamps: Sequence[int], faults: FaultLog, delta: float) -> np.ndarray:
    """``y_t = 1`` iff some fault time lies in ``(t, t + delta]``."""
    if delta <= 0:
        raise ConfigError(f"horizon delta must be positive, got {delta}")
    ts = np.asarray(timestamps, dtype=float)
    if len(faults) == 0:
        logger.warning("Empty fault log: every label is 0")
        return np.zeros(ts.size, dtype=np.int8)
    times = faults.times().astype(float)
    first_after = np.searchsorted(times, ts, side="right")
    last_within = np.searchsorted(times, ts + delta, side="right")
    return (last_within > first_after).astype(np.int8)


@dataclass
class LabeledDataset:
    """Feature rows of one representation with their horizon labels."""

    X: pd.DataFrame
    y: np.ndarray
    timestamps: np.ndarray
    horizon_delta: float
    aggregation_window: float

    def __len__(self) -> int:
        return len(self.y)

    @property
    def positive_rate(self) -> float:
        return float(np.mean(self.y)) if len(self.y) else 0.0


def native_cadence(timestamps: Sequence[int]) -> float:
    ts = np.asarray(timestamps, dtype=float)
    if ts.size < 2:
        raise InsufficientDataError("cadence needs at least 2 timestamps")
    return float(np.median(np.diff(ts)))


def aggregate_frame(
    frame: pd.DataFrame,
    y: Sequence[int],
    window: float,
    *,
    horizon_delta: float = 0.0,
) -> LabeledDataset:
    """Average features over non-overlapping windows of ``window`` seconds.

    A bin is labelled 1 when any of its members is, and is stamped with its
    start time.  ``window`` equal to the sampling cadence leaves a regular
    frame unchanged.
    """
    data = getattr(frame, "frame", frame)
    labels = np.asarray(y, dtype=np.int8)
    if labels.size != len(data.index):
        raise InsufficientDataError(f"{labels.size} label(s) for {len(data.index)} row(s)")
    ts = data.index.to_numpy(dtype=np.int64)
    cadence = native_cadence(ts)
    if window < cadence:
        raise ConfigError(f"aggregation window {window}s is shorter than the {cadence:g}s cadence")

    origin = int(ts[0])
    bins = (ts - origin) // int(window)
    grouped = data.groupby(bins, sort=True)
    X = grouped.mean()
    bin_labels = pd.Series(labels, index=data.index).groupby(bins, sort=True).max()
    starts = origin + X.index.to_numpy(dtype=np.int64) * int(window)
    X.index = pd.Index(starts, name=data.index.name or "timestamp")
    return LabeledDataset(
        X=X,
        y=bin_labels.to_numpy(dtype=np.int8),
        timestamps=starts,
        horizon_delta=float(horizon_delta),
        aggregation_window=float(window),
    )
