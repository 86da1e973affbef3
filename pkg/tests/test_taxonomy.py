from __future__ import annotations

import json

import pytest

from errors import ConfigError, EmptyCanonicalError
from taxonomy import (
    assign_segments,
    parse_taxonomy,
    taxonomy_from_dict,
    taxonomy_to_dict,
)

SEGMENTS = ["Cumulative", "Latency", "Pressure", "Network", "State", "Structural"]
FAMILIES = ["Ratio & bounded", "Size & volume", "Weak dynamic", "Monitoring"]


def test_default_taxonomy_shape(taxonomy) -> None:
    assert [s.name for s in taxonomy.canonical_segments] == SEGMENTS
    assert [f.name for f in taxonomy.residual_families] == FAMILIES
    assert taxonomy.segment("Latency").transform == "LTC"
    assert "processcpusecondstotal" in taxonomy.keep_list


def test_single_segment_document(tmp_path) -> None:
    path = tmp_path / "taxonomy.json"
    path.write_text(
        json.dumps(
            {
                "canonical": [
                    {"name": "cumulative", "transform": "MCR", "normalization": "ROBUST", "patterns": ["*_total"]}
                ]
            }
        ),
        encoding="utf-8",
    )
    taxonomy = parse_taxonomy(path)

    assert len(taxonomy.canonical_segments) == 1
    assert taxonomy.residual_families == ()
    assert taxonomy.keep_list == frozenset()


def test_unknown_transform_is_rejected() -> None:
    document = {"canonical": [{"name": "x", "transform": "FOO", "normalization": "NONE"}]}
    with pytest.raises(ConfigError, match="unknown transform FOO"):
        taxonomy_from_dict(document)


def test_residual_family_cannot_use_semantic_transform() -> None:
    document = {"residual": [{"name": "x", "transform": "MCR", "normalization": "NONE"}]}
    with pytest.raises(ConfigError):
        taxonomy_from_dict(document)


def test_duplicate_segment_names_are_rejected() -> None:
    entry = {"name": "dup", "transform": "LTC", "normalization": "NONE"}
    with pytest.raises(ConfigError, match="duplicate segment name dup"):
        taxonomy_from_dict({"canonical": [entry, entry]})


def test_invalid_json(tmp_path) -> None:
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(ConfigError):
        parse_taxonomy(path)


def test_taxonomy_document_reparses_to_same_taxonomy(taxonomy) -> None:
    assert taxonomy_from_dict(taxonomy_to_dict(taxonomy)) == taxonomy


def test_assign_segments_uses_declared_segments(taxonomy) -> None:
    space = assign_segments(["jvmthreadsstartedtotal", "cassandrareadlatency99th"], taxonomy)

    assert space.canonical["Cumulative"] == ["jvmthreadsstartedtotal"]
    assert space.canonical["Latency"] == ["cassandrareadlatency99th"]
    assert space.canonical["State"] == []
    assert space.unmatched == []


def test_first_declared_group_wins_on_overlap(taxonomy) -> None:
    space = assign_segments(["jvmthreadsstartedtotal"], taxonomy)

    assert space.group_of("jvmthreadsstartedtotal") == ("canonical", "Cumulative")
    assert space.overlaps["jvmthreadsstartedtotal"][0] == "Cumulative"
    assert "Weak dynamic" in space.overlaps["jvmthreadsstartedtotal"]


def test_unmatched_columns_are_kept_aside(taxonomy) -> None:
    space = assign_segments(["processcpusecondstotal", "mystery_metric"], taxonomy)

    assert space.unmatched == ["mystery_metric"]


def test_empty_segments_are_not_analysed(taxonomy) -> None:
    space = assign_segments(
        ["processcpusecondstotal", "jvmclassesloadedtotal", "cassandrareadlatency99th"], taxonomy
    )

    assert space.analysis_segments() == {"Cumulative": ["jvmclassesloadedtotal", "processcpusecondstotal"]}


def test_no_canonical_column(taxonomy) -> None:
    with pytest.raises(EmptyCanonicalError):
        assign_segments(["scrapeduration", "mystery_metric"], taxonomy)


def test_assignment_partitions_generated_columns(small_telemetry, taxonomy) -> None:
    columns = list(small_telemetry.frame.columns)
    space = assign_segments(columns, taxonomy)

    placed = space.all_features()
    assert sorted(placed) == sorted(columns)
    assert len(set(placed)) == len(placed)
