"""Domain-informed segment taxonomy and column assignment."""

from .schema import (  # noqa: F401
    CANONICAL_TRANSFORMS,
    DEFAULT_TAXONOMY_PATH,
    NORMALIZATION_IDS,
    RESIDUAL_TRANSFORMS,
    TRANSFORM_IDS,
    GroupSpec,
    SegmentTaxonomy,
    default_taxonomy,
    parse_taxonomy,
    taxonomy_from_dict,
    taxonomy_to_dict,
)
from .assign import CANONICAL, RESIDUAL, SegmentedSpace, assign_segments, matches  # noqa: F401

__all__ = [
    "CANONICAL_TRANSFORMS",
    "DEFAULT_TAXONOMY_PATH",
    "NORMALIZATION_IDS",
    "RESIDUAL_TRANSFORMS",
    "TRANSFORM_IDS",
    "GroupSpec",
    "SegmentTaxonomy",
    "default_taxonomy",
    "parse_taxonomy",
    "taxonomy_from_dict",
    "taxonomy_to_dict",
    "CANONICAL",
    "RESIDUAL",
    "SegmentedSpace",
    "assign_segments",
    "matches",
]
