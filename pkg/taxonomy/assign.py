"""Partition a frame's columns into canonical segments and residual families."""

from __future__ import annotations

import fnmatch
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Tuple

import regex

from errors import EmptyCanonicalError
from taxonomy.schema import GroupSpec, SegmentTaxonomy

logger = logging.getLogger(__name__)

CANONICAL = "canonical"
RESIDUAL = "residual"


@lru_cache(maxsize=1024)
def _compile(pattern: str) -> "regex.Pattern[str]":
    # Case-sensitive: metric names are case-significant in the exports.
    return regex.compile(fnmatch.translate(pattern))


def matches(name: str, patterns: Iterable[str]) -> bool:
    """True if ``name`` matches any of the glob ``patterns`` (``*`` and ``?``)."""
    return any(_compile(p).match(name) is not None for p in patterns)


@dataclass
class SegmentedSpace:
    """Column partition produced by :func:`assign_segments`.

    ``canonical`` and ``residual`` keep the taxonomy's declaration order and
    list each group's members lexicographically.  ``overlaps`` maps a column
    that several groups claim to the ordered list of claiming groups; the
    first entry is the group it was assigned to.
    """

    canonical: Dict[str, List[str]] = field(default_factory=dict)
    residual: Dict[str, List[str]] = field(default_factory=dict)
    unmatched: List[str] = field(default_factory=list)
    overlaps: Dict[str, List[str]] = field(default_factory=dict)

    def canonical_features(self) -> List[str]:
        return [c for cols in self.canonical.values() for c in cols]

    def residual_features(self) -> List[str]:
        return [c for cols in self.residual.values() for c in cols]

    def all_features(self) -> List[str]:
        return self.canonical_features() + self.residual_features() + list(self.unmatched)

    def analysis_segments(self) -> Dict[str, List[str]]:
        """Canonical segments with at least two features."""
        return {name: list(cols) for name, cols in self.canonical.items() if len(cols) >= 2}

    def group_of(self, column: str) -> Tuple[str, str]:
        """Return ``(space, group_name)`` for an assigned column."""
        for name, cols in self.canonical.items():
            if column in cols:
                return CANONICAL, name
        for name, cols in self.residual.items():
            if column in cols:
                return RESIDUAL, name
        raise KeyError(column)

    def to_dict(self) -> dict:
        return {
            "canonical": {k: list(v) for k, v in self.canonical.items()},
            "residual": {k: list(v) for k, v in self.residual.items()},
            "unmatched": list(self.unmatched),
            "overlaps": {k: list(v) for k, v in sorted(self.overlaps.items())},
        }


def _claimants(column: str, groups: Iterable[GroupSpec]) -> List[str]:
    return [g.name for g in groups if matches(column, g.patterns)]


def assign_segments(
    columns: Iterable[str],
    taxonomy: SegmentTaxonomy,
    *,
    require_canonical: bool = True,
) -> SegmentedSpace:
    """Assign every column to exactly one group, or to ``unmatched``.

    Parameters
    ----------
    columns:
        Column names of a cleaned ``MetricFrame`` (a frame itself also works,
        iterating a DataFrame yields its columns).
    taxonomy:
        Canonical patterns are tried first, in declaration order, then
        residual patterns.  The first matching group wins.
    require_canonical:
        Raise :class:`~errors.EmptyCanonicalError` when no column lands in a
        canonical segment.

    Notes
    -----
    Columns are sorted before matching, so the result does not depend on the
    frame's column order.
    """
    space = SegmentedSpace(
        canonical={s.name: [] for s in taxonomy.canonical_segments},
        residual={f.name: [] for f in taxonomy.residual_families},
    )

    for column in sorted(str(c) for c in columns):
        canonical_hits = _claimants(column, taxonomy.canonical_segments)
        residual_hits = _claimants(column, taxonomy.residual_families)
        claimants = canonical_hits + residual_hits
        if not claimants:
            space.unmatched.append(column)
            continue
        if len(claimants) > 1:
            space.overlaps[column] = claimants
        if canonical_hits:
            space.canonical[canonical_hits[0]].append(column)
        else:
            space.residual[residual_hits[0]].append(column)

    n_canonical = len(space.canonical_features())
    if require_canonical and n_canonical == 0:
        raise EmptyCanonicalError("no column matched any canonical segment of the taxonomy")

    if space.overlaps:
        logger.info("%d column(s) matched more than one group; first declared group wins", len(space.overlaps))
    if space.unmatched:
        logger.warning("%d column(s) matched no segment or family", len(space.unmatched))
    logger.info(
        "Assigned %d canonical, %d residual, %d unmatched column(s)",
        n_canonical,
        len(space.residual_features()),
        len(space.unmatched),
    )
    return space
