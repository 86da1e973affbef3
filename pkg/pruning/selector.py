"""Redundant-feature removal along MST edges."""

from __future__ import annotations

import logging
from typing import Collection, List, NamedTuple, Optional, Sequence, Tuple

import pandas as pd

from config import SEMSEG_TAU_RED
from errors import ConfigError
from pruning.mst import corr_distance_mst

logger = logging.getLogger(__name__)

REDUNDANT = "redundant"
KEEP_LIST_OVERRIDE = "redundant_partner_kept"


class RemovedFeature(NamedTuple):
    feature: str
    reason: str
    partner: str
    rho: float


def validate_tau(tau_red: float) -> float:
    if not 0.0 < tau_red <= 1.0:
        raise ConfigError(f"tau_red must lie in (0, 1], got {tau_red}")
    return float(tau_red)


def _redundancy(abs_corr: pd.DataFrame, feature: str, retained: Sequence[str]) -> float:
    return float(sum(abs_corr.at[feature, g] for g in retained if g != feature))


def _choose(
    a: str, b: str, abs_corr: pd.DataFrame, retained: Sequence[str], keep: Collection[str]
) -> Optional[Tuple[str, str, str]]:
    """Return ``(removed, partner, reason)`` for a redundant edge, or None."""
    score_a, score_b = _redundancy(abs_corr, a, retained), _redundancy(abs_corr, b, retained)
    if score_a == score_b:
        victim = max(a, b)
    else:
        victim = a if score_a > score_b else b
    other = b if victim == a else a
    if victim not in keep:
        return victim, other, REDUNDANT
    if other not in keep:
        return other, victim, KEEP_LIST_OVERRIDE
    return None


def _prune_pass(
    retained: List[str],
    corr: pd.DataFrame,
    abs_corr: pd.DataFrame,
    tau_red: float,
    keep: Collection[str],
) -> List[RemovedFeature]:
    # Ascending distance is descending |rho|.
    edges = corr_distance_mst(corr.loc[retained, retained])
    removed: List[RemovedFeature] = []
    for edge in edges:
        if abs(edge.rho) < tau_red:
            break
        if edge.feature_a not in retained or edge.feature_b not in retained:
            continue
        choice = _choose(edge.feature_a, edge.feature_b, abs_corr, retained, keep)
        if choice is None:
            logger.debug("%s and %s are both keep-listed", edge.feature_a, edge.feature_b)
            continue
        victim, partner, reason = choice
        retained.remove(victim)
        removed.append(RemovedFeature(victim, reason, partner, edge.rho))
    return removed


def prune_segment(
    features: Sequence[str],
    corr: pd.DataFrame,
    tau_red: float = SEMSEG_TAU_RED,
    keep_list: Collection[str] = (),
) -> Tuple[List[str], List[RemovedFeature]]:
    """Drop near-duplicate features from one segment.

    MST edges are visited from the strongest ``|rho|`` down.  For an edge at
    or above ``tau_red`` whose endpoints are both still retained, the endpoint
    with the larger sum of ``|rho|`` to the other retained features is removed
    (the lexicographically larger name on a tie).  A keep-listed endpoint is
    never removed; its partner goes instead, and an edge between two
    keep-listed features removes nothing.  Passes over the MST of the
    surviving features repeat until a pass removes nothing.

    Returns
    -------
    tuple
        Retained features in their input order and the removal records.
    """
    tau_red = validate_tau(tau_red)
    retained = [str(f) for f in features]
    if len(retained) < 2:
        return retained, []

    corr = corr.loc[retained, retained]
    abs_corr = corr.abs().fillna(0.0)
    keep = frozenset(keep_list)

    removed: List[RemovedFeature] = []
    while True:
        step = _prune_pass(retained, corr, abs_corr, tau_red, keep)
        if not step:
            break
        removed.extend(step)
    for record in removed:
        logger.info(
            "Pruned %s (|rho|=%.4f with %s, %s)", record.feature, abs(record.rho), record.partner, record.reason
        )
    return retained, removed

