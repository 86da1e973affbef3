from __future__ import annotations

from itertools import combinations

import numpy as np
import pandas as pd
import pytest

from errors import ConfigError
from pruning import KEEP_LIST_OVERRIDE, REDUNDANT, corr_distance_mst, prune_segment, run_pruning
from synth import SynthConfig, generate_telemetry
from synth.names import CANONICAL_POOLS
from taxonomy import assign_segments
from transforms import apply_pipeline


def _corr(pairs: dict, names: list) -> pd.DataFrame:
    matrix = pd.DataFrame(np.eye(len(names)), index=names, columns=names)
    for (a, b), value in pairs.items():
        matrix.loc[a, b] = matrix.loc[b, a] = value
    return matrix


NEAR_DUPLICATES = _corr({("a", "b"): 0.99, ("a", "c"): 0.3, ("b", "c"): 0.3}, ["a", "b", "c"])


def test_mst_prefers_strong_correlations() -> None:
    edges = corr_distance_mst(NEAR_DUPLICATES)

    assert len(edges) == 2
    assert (edges[0].feature_a, edges[0].feature_b) == ("a", "b")
    assert edges[0].weight == pytest.approx(0.01)


def test_mst_breaks_ties_lexicographically() -> None:
    corr = _corr({("a", "b"): 0.5, ("a", "c"): 0.5, ("b", "c"): 0.5}, ["c", "b", "a"])
    edges = corr_distance_mst(corr)

    assert [(e.feature_a, e.feature_b) for e in edges] == [("a", "b"), ("a", "c")]


def _brute_force_mst(corr: pd.DataFrame) -> tuple:
    names = sorted(corr.columns)
    candidates = [(a, b, 1.0 - abs(float(corr.at[a, b]))) for a, b in combinations(names, 2)]
    best = None
    for chosen in combinations(candidates, len(names) - 1):
        parent = {name: name for name in names}

        def root(name: str) -> str:
            while parent[name] != name:
                name = parent[name]
            return name

        spanning = True
        for a, b, _ in chosen:
            ra, rb = root(a), root(b)
            if ra == rb:
                spanning = False
                break
            parent[ra] = rb
        total = sum(w for _, _, w in chosen)
        if spanning and (best is None or total < best[0] - 1e-12):
            best = (total, {(a, b) for a, b, _ in chosen})
    return best


@pytest.mark.parametrize("size", [2, 3, 4, 5, 6])
def test_mst_matches_brute_force_enumeration(size: int) -> None:
    rng = np.random.default_rng(size)
    names = [f"f{i}" for i in range(size)]
    for _ in range(10):
        pairs = {(a, b): float(rng.uniform(-1.0, 1.0)) for a, b in combinations(names, 2)}
        corr = _corr(pairs, names)
        edges = corr_distance_mst(corr)
        total, chosen = _brute_force_mst(corr)

        assert sum(e.weight for e in edges) == pytest.approx(total, abs=1e-12)
        assert {(e.feature_a, e.feature_b) for e in edges} == chosen


def test_exact_duplicate_drops_larger_name() -> None:
    retained, removed = prune_segment(["x", "y"], _corr({("x", "y"): 1.0}, ["x", "y"]), 0.95)

    assert retained == ["x"]
    assert removed[0].feature == "y"
    assert removed[0].partner == "x"
    assert removed[0].reason == REDUNDANT


def test_near_duplicate_pair_loses_one_member() -> None:
    retained, removed = prune_segment(["a", "b", "c"], NEAR_DUPLICATES, 0.95)

    assert "c" in retained
    assert len(retained) == 2
    assert [r.feature for r in removed] in (["a"], ["b"])


def test_keep_list_protects_feature() -> None:
    retained, removed = prune_segment(["a", "b", "c"], NEAR_DUPLICATES, 0.95, keep_list={"b"})

    assert retained == ["b", "c"]
    assert removed[0].feature == "a"
    assert removed[0].reason == KEEP_LIST_OVERRIDE


def test_two_kept_features_are_both_retained() -> None:
    retained, removed = prune_segment(["a", "b", "c"], NEAR_DUPLICATES, 0.95, keep_list={"a", "b"})

    assert retained == ["a", "b", "c"]
    assert removed == []


def test_threshold_above_every_edge_removes_nothing() -> None:
    retained, removed = prune_segment(["a", "b", "c"], NEAR_DUPLICATES, 1.0)

    assert retained == ["a", "b", "c"]
    assert removed == []


def test_pruning_is_idempotent() -> None:
    corr = _corr(
        {("a", "b"): 0.99, ("a", "c"): 0.98, ("b", "c"): 0.97, ("a", "d"): 0.1, ("b", "d"): 0.1, ("c", "d"): 0.1},
        list("abcd"),
    )
    retained, _ = prune_segment(list("abcd"), corr, 0.95)
    again, removed = prune_segment(retained, corr, 0.95)

    assert retained == ["b", "d"]
    assert again == retained
    assert removed == []


def test_invalid_threshold() -> None:
    with pytest.raises(ConfigError):
        prune_segment(["a", "b"], _corr({("a", "b"): 0.5}, ["a", "b"]), 0.0)


def test_planted_duplicates_are_removed(taxonomy) -> None:
    telemetry = generate_telemetry(SynthConfig(n_samples=800, duplicates_per_segment=2, seed=3))
    space = assign_segments(telemetry.frame.columns, taxonomy)
    canonical, _ = apply_pipeline(telemetry.frame, space, taxonomy)
    result = run_pruning(canonical, space.analysis_segments(), 0.95, taxonomy.keep_list)

    for name, pool in CANONICAL_POOLS.items():
        removed = sorted(r.feature for r in result.removed[name])
        assert removed == sorted(pool[4:6])
        assert sorted(result.retained[name]) == sorted(pool[:4])


def test_pruning_report_partitions_segments(transformed) -> None:
    canonical, _, segments = transformed
    result = run_pruning(canonical, segments, 0.95)

    for name, cols in segments.items():
        kept = set(result.retained[name])
        dropped = {r.feature for r in result.removed[name]}
        assert kept | dropped == set(cols)
        assert not kept & dropped
    invariance = result.quasi_invariance()
    assert invariance["icc_change"] >= 0.0
    assert set(result.to_dict()) >= {"tau_red", "segments", "pre", "post", "quasi_invariance"}


def test_unit_threshold_keeps_generated_features(transformed) -> None:
    canonical, _, segments = transformed
    result = run_pruning(canonical, segments, 1.0)

    assert all(not removed for removed in result.removed.values())
    assert result.quasi_invariance()["icc_change"] == pytest.approx(0.0)
