"""Segment-wise redundancy reduction with before/after separability reports."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Collection, Dict, List, Optional

import pandas as pd

from config import SEMSEG_TAU_RED
from pruning.mst import MstEdge, corr_distance_mst
from pruning.selector import RemovedFeature, prune_segment, validate_tau
from separability.correlation import FrameLike, SegmentMap, _frame, spearman_matrix
from separability.summary import CorrelationReport, analyze_segments

logger = logging.getLogger(__name__)


@dataclass
class PruneResult:
    """Outcome of :func:`run_pruning`.

    ``retained[k]`` and ``removed[k]`` partition the original segment ``k``;
    the taxonomy itself is never re-derived.
    """

    retained: Dict[str, List[str]]
    removed: Dict[str, List[RemovedFeature]]
    mst_edges: Dict[str, List[MstEdge]]
    pre_report: CorrelationReport
    post_report: CorrelationReport
    tau_red: float = SEMSEG_TAU_RED
    keep_list: List[str] = field(default_factory=list)

    def retained_features(self) -> List[str]:
        return [c for cols in self.retained.values() for c in cols]

    def quasi_invariance(self) -> Dict[str, Optional[float]]:
        """Changes of the micro statistics caused by pruning."""
        pre, post = self.pre_report, self.post_report
        gap_ratio = None
        if pre.delta and post.delta is not None:
            gap_ratio = post.delta / pre.delta
        return {
            "icc_change": abs(post.icc_micro - pre.icc_micro),
            "icor_change": (
                abs(post.icor_micro - pre.icor_micro)
                if pre.icor_micro is not None and post.icor_micro is not None
                else None
            ),
            "gap_pre": pre.delta,
            "gap_post": post.delta,
            "gap_ratio": gap_ratio,
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tau_red": self.tau_red,
            "keep_list": sorted(self.keep_list),
            "segments": {
                name: {
                    "retained": list(self.retained[name]),
                    "removed": [r._asdict() for r in self.removed.get(name, [])],
                    "mst_edges": [e._asdict() for e in self.mst_edges.get(name, [])],
                }
                for name in self.retained
            },
            "pre": self.pre_report.to_dict(),
            "post": self.post_report.to_dict(),
            "quasi_invariance": self.quasi_invariance(),
        }


def run_pruning(
    frame: FrameLike,
    segments: SegmentMap,
    tau_red: float = SEMSEG_TAU_RED,
    keep_list: Collection[str] = (),
) -> PruneResult:
    """Prune every segment independently and report separability before and after.

    Parameters
    ----------
    frame:
        Transformed canonical frame.
    segments:
        Canonical segment map; segments are never merged or re-derived.
    tau_red:
        Redundancy threshold on ``|rho|`` in ``(0, 1]``.
    keep_list:
        Features that must survive pruning.
    """
    tau_red = validate_tau(tau_red)
    data: pd.DataFrame = _frame(frame)
    columns = [c for cols in segments.values() for c in cols]
    corr, _ = spearman_matrix(data, columns)

    retained: Dict[str, List[str]] = {}
    removed: Dict[str, List[RemovedFeature]] = {}
    mst_edges: Dict[str, List[MstEdge]] = {}
    for name, cols in segments.items():
        cols = list(cols)
        block = corr.loc[cols, cols]
        mst_edges[name] = corr_distance_mst(block)
        retained[name], removed[name] = prune_segment(cols, block, tau_red, keep_list)
        if len(retained[name]) == 1 and len(cols) > 1:
            logger.info("Segment %s reduced to a single feature; excluded from post-pruning ICC", name)

    pre_report = analyze_segments(data, segments)
    post_report = analyze_segments(data, retained)
    n_removed = sum(len(v) for v in removed.values())
    logger.info("Pruning removed %d of %d canonical feature(s)", n_removed, len(columns))
    return PruneResult(
        retained=retained,
        removed=removed,
        mst_edges=mst_edges,
        pre_report=pre_report,
        post_report=post_report,
        tau_red=tau_red,
        keep_list=sorted(keep_list),
    )
