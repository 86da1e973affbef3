from __future__ import annotations

import json
from pathlib import Path

import pytest

from main import main
from ui import build_parser, parse_arguments
from ui.cli import int_range, model_list

SMALL_SYNTH = ["--samples", "600", "--seed", "11"]
SMALL_GRID = ["--splits", "2..3", "--deltas", "900", "--windows", "300", "--models", "logistic", "--no-progress"]


@pytest.fixture(scope="module")
def ingested(tmp_path_factory) -> Path:
    """A synthetic export that went through ``synth`` and ``ingest``."""
    root = tmp_path_factory.mktemp("cli")
    assert main(["synth", "--out", str(root / "synth"), *SMALL_SYNTH]) == 0
    assert main(["ingest", "--in", str(root / "synth" / "metrics.csv"), "--out", str(root / "wide.csv")]) == 0
    return root


def _read_json(path: Path) -> dict:
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def test_int_range_forms() -> None:
    assert int_range("2..5") == (2, 3, 4, 5)
    assert int_range("2,4") == (2, 4)


def test_model_list_normalises_names() -> None:
    assert model_list("logistic,Boosted") == ("LOGISTIC", "BOOSTED")


def test_parser_defaults() -> None:
    args = parse_arguments(["evaluate", "--in", "w.csv", "--faults", "f.csv", "--out", "o"])

    assert args.splits == tuple(range(2, 10))
    assert args.deltas == (300.0, 900.0)
    assert args.windows == (300.0, 600.0, 900.0, 1200.0)
    assert args.models == ("LOGISTIC", "FOREST", "BOOSTED")
    assert not args.no_baselines


def test_help_lists_subcommands() -> None:
    text = build_parser().format_help()
    for command in ("synth", "ingest", "analyze", "evaluate", "run"):
        assert command in text


@pytest.mark.parametrize(
    "argv",
    [
        ["ingest", "--in", "x.csv", "--out", "y.csv", "--max-missing", "1.5"],
        ["synth", "--out", "o", "--samples", "10"],
        ["evaluate", "--in", "w.csv", "--faults", "f.csv", "--out", "o", "--models", "svm"],
        ["analyze", "--in", "w.csv", "--out", "o", "--tau-red", "0"],
        ["analyze", "--in", "w.csv", "--out", "o", "--window", "1"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_with_one(argv) -> None:
    assert main(argv) == 1


def test_missing_input_exits_with_two(tmp_path) -> None:
    assert main(["ingest", "--in", str(tmp_path / "absent.csv"), "--out", str(tmp_path / "w.csv")]) == 2


def test_malformed_export_exits_with_two(tmp_path) -> None:
    path = tmp_path / "bad.csv"
    path.write_text("ts,name\n1,2\n", encoding="utf-8")
    assert main(["ingest", "--in", str(path), "--out", str(tmp_path / "w.csv")]) == 2


def test_invalid_taxonomy_exits_with_one(ingested, tmp_path) -> None:
    taxonomy = tmp_path / "taxonomy.json"
    taxonomy.write_text(json.dumps({"canonical": [{"name": "x", "transform": "FOO", "normalization": "NONE"}]}))
    argv = ["analyze", "--in", str(ingested / "wide.csv"), "--out", str(tmp_path / "a"), "--taxonomy", str(taxonomy)]
    assert main(argv) == 1


def test_synth_writes_its_files(ingested) -> None:
    synth = ingested / "synth"
    for name in ("metrics.csv", "faults.csv", "ground_truth.json", "manifest.json"):
        assert (synth / name).is_file()
    manifest = _read_json(synth / "manifest.json")
    assert manifest["command"] == "synth"
    assert manifest["seed"] == 11


def test_ingest_writes_cleaning_summary(ingested) -> None:
    summary = _read_json(ingested / "wide_cleaning.json")

    assert summary["load"]["n_skipped"] == 0
    assert summary["cleaning"]["dropped"] == {}
    assert summary["n_rows"] == 600


def test_analyze_report_contents(ingested, tmp_path) -> None:
    out = tmp_path / "analysis"
    argv = ["analyze", "--in", str(ingested / "wide.csv"), "--out", str(out), "--shift-repeats", "3", "--dump-omegas"]
    assert main(argv) == 0

    report = _read_json(out / "separability.json")
    for key in ("icc_micro", "icor_micro", "delta"):
        assert isinstance(report[key], float)
    assert 0.0 <= report["utest"]["p"] <= 1.0
    assert "icc_shift" in report["shift"]
    assert report["delta"] > report["shift"]["delta_shift"]
    assert (out / "fig_segment_icc.csv").read_text().startswith("segment,icc,n_pairs,icor_micro\n")
    assert (out / "fig2_omegas.csv").is_file()
    assert set(report["degenerate_columns"]) == {"canonical", "residual"}


def test_unit_threshold_prunes_nothing(ingested, tmp_path) -> None:
    out = tmp_path / "analysis"
    argv = ["analyze", "--in", str(ingested / "wide.csv"), "--out", str(out)]
    argv += ["--shift-repeats", "1", "--tau-red", "1.0"]
    assert main(argv) == 0

    pruning = _read_json(out / "pruning.json")
    assert all(not seg["removed"] for seg in pruning["segments"].values())


def test_analyze_is_byte_identical_across_runs(ingested, tmp_path) -> None:
    outputs = []
    for name in ("first", "second"):
        out = tmp_path / name
        assert main(["analyze", "--in", str(ingested / "wide.csv"), "--out", str(out), "--shift-repeats", "2"]) == 0
        outputs.append((out / "separability.json").read_bytes())
    assert outputs[0] == outputs[1]


def test_evaluate_writes_reports(ingested, tmp_path) -> None:
    out = tmp_path / "evaluation"
    argv = [
        "evaluate",
        "--in",
        str(ingested / "wide.csv"),
        "--faults",
        str(ingested / "synth" / "faults.csv"),
        "--out",
        str(out),
        *SMALL_GRID,
    ]
    assert main(argv) == 0

    document = _read_json(out / "risk_report.json")
    assert document["report"]["representations"] == ["canonical", "residual", "full", "pca"]
    assert set(document["paired"]) == {"canonical-residual", "canonical-full", "canonical-pca"}
    assert len(document["report"]["cells"]) == 2 * 4
    for name in ("risk_report.csv", "fig3_gap.csv", "fig4_risk_auc.csv", "fig5_condcorr.csv", "manifest.json"):
        assert (out / name).is_file()
    assert len((out / "fig3_gap.csv").read_text().splitlines()) == 1 + 2


def test_evaluate_without_baselines(ingested, tmp_path) -> None:
    out = tmp_path / "evaluation"
    argv = [
        "evaluate",
        "--in",
        str(ingested / "wide.csv"),
        "--faults",
        str(ingested / "synth" / "faults.csv"),
        "--out",
        str(out),
        "--no-baselines",
        *SMALL_GRID,
    ]
    assert main(argv) == 0
    assert _read_json(out / "risk_report.json")["report"]["representations"] == ["canonical", "residual"]


def test_evaluate_missing_fault_log_exits_with_two(ingested, tmp_path) -> None:
    argv = [
        "evaluate",
        "--in",
        str(ingested / "wide.csv"),
        "--faults",
        str(tmp_path / "absent.csv"),
        "--out",
        str(tmp_path / "e"),
        *SMALL_GRID,
    ]
    assert main(argv) == 2


def test_manifest_digest_ignores_timing(ingested, tmp_path) -> None:
    digests = []
    for name in ("first", "second"):
        out = tmp_path / name
        assert main(["analyze", "--in", str(ingested / "wide.csv"), "--out", str(out), "--shift-repeats", "1"]) == 0
        digests.append(_read_json(out / "manifest.json")["config_digest"])
    assert digests[0] == digests[1]
