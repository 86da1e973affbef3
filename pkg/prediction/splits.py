"""Expanding-window time splits."""

from __future__ import annotations

from typing import List, NamedTuple

from errors import ConfigError, InsufficientDataError


class Fold(NamedTuple):
    index: int
    train: range
    test: range


def time_splits(n_rows: int, n_splits: int) -> List[Fold]:
    """Boundaries ``b_i = floor(i * T / (n_splits + 1))``; fold ``i`` trains on
    ``[0, b_i)`` and tests on ``[b_i, b_{i+1})``.
    """
    if n_splits < 2:
        raise ConfigError(f"n_splits must be >= 2, got {n_splits}")
    if n_rows < (n_splits + 1) * 2:
        raise InsufficientDataError(f"{n_rows} row(s) are too few for {n_splits} splits")
    bounds = [i * n_rows // (n_splits + 1) for i in range(n_splits + 2)]
    return [Fold(i, range(0, bounds[i]), range(bounds[i], bounds[i + 1])) for i in range(1, n_splits + 1)]
