"""Declarative segment taxonomy: data model, parsing and validation.

A taxonomy document is the expert knowledge that decides which monitored
metrics are *semantically related*.  It lists the canonical segments (each
with the semantic transform and normalization applied to its members), the
residual families with their lightweight treatment, and an optional list of
features the pruning operator must never remove.

Document layout::

    {
      "canonical": [{"name": ..., "transform": ..., "normalization": ...,
                     "patterns": [...]}, ...],
      "residual":  [{"name": ..., "transform": ..., "normalization": ...,
                     "patterns": [...]}, ...],
      "keep_list": ["metric", ...]
    }
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Mapping, Tuple, Union

from errors import ConfigError

logger = logging.getLogger(__name__)

#: Semantic transforms available to canonical segments.
CANONICAL_TRANSFORMS: FrozenSet[str] = frozenset({"MCR", "LTC", "BSR", "NETRATE", "GBD", "RBDR"})
#: Lightweight transforms available to residual families.
RESIDUAL_TRANSFORMS: FrozenSet[str] = frozenset(
    {"RESID_NONE", "RESID_SQRT", "RESID_LOG1P", "RESID_DIFF"}
)
TRANSFORM_IDS: FrozenSet[str] = CANONICAL_TRANSFORMS | RESIDUAL_TRANSFORMS
NORMALIZATION_IDS: FrozenSet[str] = frozenset({"ROBUST", "LOG1P", "ZSCORE_COND", "NONE"})

DEFAULT_TAXONOMY_PATH: str = os.path.join(os.path.dirname(__file__), "default_taxonomy.json")


@dataclass(frozen=True)
class GroupSpec:
    """One canonical segment or residual family."""

    name: str
    transform: str
    normalization: str
    patterns: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "transform": self.transform,
            "normalization": self.normalization,
            "patterns": list(self.patterns),
        }


@dataclass(frozen=True)
class SegmentTaxonomy:
    """Ordered canonical segments, residual families and the pruning keep-list."""

    canonical_segments: Tuple[GroupSpec, ...]
    residual_families: Tuple[GroupSpec, ...]
    keep_list: FrozenSet[str] = field(default_factory=frozenset)

    def segment(self, name: str) -> GroupSpec:
        for spec in self.canonical_segments:
            if spec.name == name:
                return spec
        raise KeyError(name)

    def family(self, name: str) -> GroupSpec:
        for spec in self.residual_families:
            if spec.name == name:
                return spec
        raise KeyError(name)


def _parse_group(entry: Any, section: str, allowed: FrozenSet[str]) -> GroupSpec:
    if not isinstance(entry, Mapping):
        raise ConfigError(f"{section}: every entry must be an object, got {entry!r}")
    try:
        name = str(entry["name"])
        transform = str(entry["transform"])
        normalization = str(entry["normalization"])
    except KeyError as exc:
        raise ConfigError(f"{section}: entry is missing key {exc.args[0]!r}") from exc

    if transform not in TRANSFORM_IDS:
        raise ConfigError(f"unknown transform {transform}")
    if transform not in allowed:
        raise ConfigError(f"{section} group {name!r} cannot use transform {transform}")
    if normalization not in NORMALIZATION_IDS:
        raise ConfigError(f"unknown normalization {normalization}")

    patterns = entry.get("patterns", [])
    if not isinstance(patterns, list) or not all(isinstance(p, str) for p in patterns):
        raise ConfigError(f"{section} group {name!r}: patterns must be a list of strings")
    return GroupSpec(name, transform, normalization, tuple(patterns))


def _check_unique(groups: Tuple[GroupSpec, ...], kind: str) -> None:
    seen: set[str] = set()
    for spec in groups:
        if spec.name in seen:
            raise ConfigError(f"duplicate {kind} name {spec.name}")
        seen.add(spec.name)


def taxonomy_from_dict(document: Mapping[str, Any]) -> SegmentTaxonomy:
    """Build and validate a taxonomy from an already-decoded JSON document."""
    if not isinstance(document, Mapping):
        raise ConfigError("taxonomy document must be a JSON object")
    canonical_raw = document.get("canonical", [])
    residual_raw = document.get("residual", [])
    keep_raw = document.get("keep_list", [])
    if not isinstance(canonical_raw, list) or not isinstance(residual_raw, list):
        raise ConfigError("'canonical' and 'residual' must be arrays")
    if not isinstance(keep_raw, list):
        raise ConfigError("'keep_list' must be an array of strings")

    canonical = tuple(_parse_group(e, "canonical", CANONICAL_TRANSFORMS) for e in canonical_raw)
    residual = tuple(_parse_group(e, "residual", RESIDUAL_TRANSFORMS) for e in residual_raw)
    _check_unique(canonical, "segment")
    _check_unique(residual, "family")
    return SegmentTaxonomy(canonical, residual, frozenset(str(k) for k in keep_raw))


def parse_taxonomy(path: Union[str, os.PathLike]) -> SegmentTaxonomy:
    """Load a taxonomy JSON file.

    Raises
    ------
    FileNotFoundError
        If ``path`` does not exist.
    ConfigError
        If the document is not valid JSON, names an unknown transform or
        normalization, or declares the same segment/family twice.
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"Taxonomy file does not exist: {path}")
    with open(path, "r", encoding="utf-8") as f:
        try:
            document = json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    taxonomy = taxonomy_from_dict(document)
    logger.debug(
        "Parsed taxonomy %s: %d segment(s), %d residual family(ies)",
        path,
        len(taxonomy.canonical_segments),
        len(taxonomy.residual_families),
    )
    return taxonomy


def default_taxonomy() -> SegmentTaxonomy:
    """Return the bundled Cassandra/JVM taxonomy."""
    return parse_taxonomy(DEFAULT_TAXONOMY_PATH)


def taxonomy_to_dict(taxonomy: SegmentTaxonomy) -> Dict[str, List[Any]]:
    """Inverse of :func:`taxonomy_from_dict`."""
    return {
        "canonical": [s.to_dict() for s in taxonomy.canonical_segments],
        "residual": [f.to_dict() for f in taxonomy.residual_families],
        "keep_list": sorted(taxonomy.keep_list),
    }
