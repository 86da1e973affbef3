from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def make_frame(columns: dict, start: int = 0, step: int = 30) -> pd.DataFrame:
    n_rows = len(next(iter(columns.values())))
    index = pd.Index(np.arange(n_rows, dtype="int64") * step + start, name="timestamp")
    return pd.DataFrame({k: np.asarray(v, dtype=float) for k, v in columns.items()}, index=index)
