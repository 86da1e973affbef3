"""Functions for turning analysis results into serialisable text.

JSON reports are rendered with sorted keys, two-space indentation and floats
rounded to 12 decimal places; non-finite floats become ``null``.  Tables are
rendered as CSV through :mod:`pandas` with the same rounding, so identical
results always produce identical bytes.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, is_dataclass
from typing import Any, Iterable, List, Mapping, Optional, Sequence

import numpy as np
import pandas as pd

FLOAT_DECIMALS = 12


def _round(value: float) -> Optional[float]:
    if not math.isfinite(value):
        return None
    rounded = round(value, FLOAT_DECIMALS)
    # Avoid "-0.0" in reports.
    return rounded + 0.0


def to_jsonable(obj: Any) -> Any:
    """Recursively convert ``obj`` into plain JSON types.

    Objects exposing ``to_dict`` are converted through it, NumPy scalars and
    arrays become Python numbers and lists, tuples and sets become lists
    (sets sorted), and mapping keys become strings.
    """
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj))
    if hasattr(obj, "to_dict") and not isinstance(obj, (pd.DataFrame, pd.Series)):
        return to_jsonable(obj.to_dict())
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(asdict(obj))
    if isinstance(obj, Mapping):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [to_jsonable(v) for v in sorted(obj)]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def format_json(report: Any) -> str:
    """Return ``report`` as deterministic UTF-8 JSON text ending in a newline."""
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def format_table(rows: Iterable[Mapping[str, Any]], columns: Optional[Sequence[str]] = None) -> str:
    """Return ``rows`` as CSV text with a header line.

    Parameters
    ----------
    rows:
        One mapping per output row.
    columns:
        Column order.  Defaults to the keys of the first row; with no rows and
        no columns the result is an empty string.
    """
    records: List[Mapping[str, Any]] = list(rows)
    if columns is None:
        columns = list(records[0]) if records else []
    table = pd.DataFrame.from_records(
        [{c: to_jsonable(r.get(c)) for c in columns} for r in records], columns=list(columns)
    )
    return table.to_csv(index=False, lineterminator="\n")


def format_frame(frame: pd.DataFrame) -> str:
    """Return a time-indexed frame as CSV with ``timestamp`` as first column."""
    rounded = frame.round(FLOAT_DECIMALS)
    return rounded.to_csv(index=True, index_label="timestamp", lineterminator="\n")
