"""Intra-segment redundancy reduction over correlation MSTs."""

from .mst import MstEdge, corr_distance_mst  # noqa: F401
from .selector import KEEP_LIST_OVERRIDE, REDUNDANT, RemovedFeature, prune_segment  # noqa: F401
from .reduction import PruneResult, run_pruning  # noqa: F401

__all__ = [
    "MstEdge",
    "corr_distance_mst",
    "KEEP_LIST_OVERRIDE",
    "REDUNDANT",
    "RemovedFeature",
    "prune_segment",
    "PruneResult",
    "run_pruning",
]
