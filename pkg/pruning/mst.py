"""Minimum spanning tree over a segment's correlation distances."""

from __future__ import annotations

import logging
from typing import List, NamedTuple

import networkx as nx
import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)


class MstEdge(NamedTuple):
    feature_a: str
    feature_b: str
    weight: float
    rho: float


def _abs_rho(corr: pd.DataFrame, a: str, b: str) -> float:
    value = float(corr.at[a, b])
    # Constant features have no defined correlation; treat them as unrelated.
    return 0.0 if np.isnan(value) else abs(value)


def corr_distance_mst(corr: pd.DataFrame) -> List[MstEdge]:
    """Minimum spanning tree under ``d = 1 - |rho|``.

    Nodes and candidate edges are inserted in lexicographic order and the
    Kruskal sort is stable, so among equal-weight edges the lexicographically
    smaller ``(feature_a, feature_b)`` pair is chosen.  Edges are returned with
    ``feature_a < feature_b``, ordered by weight and then by name.
    """
    names = sorted(str(c) for c in corr.columns)
    if len(names) < 2:
        return []

    graph = nx.Graph()
    graph.add_nodes_from(names)
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            graph.add_edge(a, b, weight=1.0 - _abs_rho(corr, a, b))

    tree = nx.minimum_spanning_tree(graph, weight="weight", algorithm="kruskal")
    edges = []
    for a, b, data in tree.edges(data=True):
        a, b = sorted((a, b))
        rho = float(corr.at[a, b])
        edges.append(MstEdge(a, b, float(data["weight"]), 0.0 if np.isnan(rho) else rho))
    edges.sort(key=lambda e: (e.weight, e.feature_a, e.feature_b))
    return edges
