"""End-to-end checks on seeded synthetic runs and the default fixture."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from baselines import FULL, PCA, compare_representations
from main import main
from prediction import CANONICAL, RESIDUAL, EvaluationConfig
from pruning import run_pruning
from synth import SynthConfig, generate_telemetry
from taxonomy import assign_segments
from transforms import apply_pipeline

pytestmark = pytest.mark.slow

RUN_ARGS = [
    "--samples",
    "3000",
    "--seed",
    "7",
    "--duplicates",
    "1",
    "--shift-repeats",
    "5",
    "--splits",
    "2..4",
    "--deltas",
    "900",
    "--windows",
    "300,600",
    "--models",
    "logistic,boosted",
    "--no-progress",
]


def _read_json(path: Path) -> dict:
    with open(path, encoding="utf-8") as f:
        return json.load(f)


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("run")
    assert main(["run", "--out", str(out), *RUN_ARGS]) == 0
    return out


def test_run_writes_every_stage(run_dir) -> None:
    expected = [
        "synth/metrics.csv",
        "synth/faults.csv",
        "synth/ground_truth.json",
        "wide.csv",
        "wide_cleaning.json",
        "analysis/separability.json",
        "analysis/pruning.json",
        "analysis/fig_segment_icc.csv",
        "evaluation/risk_report.json",
        "evaluation/risk_report.csv",
        "evaluation/fig3_gap.csv",
        "evaluation/fig4_risk_auc.csv",
        "evaluation/fig5_condcorr.csv",
        "manifest.json",
    ]
    missing = [name for name in expected if not (run_dir / name).is_file()]
    assert missing == []
    assert _read_json(run_dir / "manifest.json")["command"] == "run"


def test_segments_are_separable_and_collapse_under_shift(run_dir) -> None:
    report = _read_json(run_dir / "analysis" / "separability.json")

    assert report["icc_micro"] > report["icor_micro"]
    assert report["utest"]["p"] < 0.05
    assert report["shift"]["delta_shift"] < 0.25 * report["delta"]


def test_pruning_removes_planted_duplicates_only(run_dir) -> None:
    pruning = _read_json(run_dir / "analysis" / "pruning.json")
    truth = _read_json(run_dir / "synth" / "ground_truth.json")

    for segment in truth["canonical"]:
        removed = pruning["segments"][segment["name"]]["removed"]
        assert len(removed) == 1
        assert removed[0]["feature"] == segment["patterns"][-1]
    assert abs(pruning["quasi_invariance"]["icor_change"]) < 0.05


def test_canonical_space_ranks_faults_better_than_residual(run_dir) -> None:
    summary = _read_json(run_dir / "evaluation" / "risk_report.json")["report"]["summary"]

    assert summary["canonical"]["auc"] > summary["residual"]["auc"]


def test_every_fold_trains_on_the_past(run_dir) -> None:
    cells = _read_json(run_dir / "evaluation" / "risk_report.json")["report"]["cells"]

    assert cells
    for cell in cells:
        for fold in cell["folds"]:
            assert fold["train_end"] < fold["test_start"]


def test_rerun_reproduces_reports(run_dir, tmp_path) -> None:
    assert main(["run", "--out", str(tmp_path), *RUN_ARGS]) == 0
    for name in ("analysis/separability.json", "analysis/pruning.json", "evaluation/risk_report.json"):
        assert (tmp_path / name).read_bytes() == (run_dir / name).read_bytes()


@pytest.fixture(scope="module")
def default_spaces(taxonomy):
    """Default telemetry with its canonical, residual and pruning result."""
    telemetry = generate_telemetry(SynthConfig())
    space = assign_segments(telemetry.frame.columns, taxonomy)
    canonical, residual = apply_pipeline(telemetry.frame, space, taxonomy)
    pruning = run_pruning(canonical.frame, space.analysis_segments(), 0.95, taxonomy.keep_list)
    return telemetry, canonical, residual, pruning


@pytest.fixture(scope="module")
def default_comparison(default_spaces):
    telemetry, canonical, residual, pruning = default_spaces
    kept = [c for c in canonical.columns if c in set(pruning.retained_features())]
    return compare_representations(
        canonical.frame[kept],
        residual.frame,
        telemetry.faults,
        EvaluationConfig(),
        full=pd.concat([canonical.frame, residual.frame], axis=1),
    )


def test_default_fixture_is_separable(default_spaces) -> None:
    report = default_spaces[3].pre_report

    assert report.delta >= 0.15
    assert report.utest.p_value < 0.001


def test_pruning_planted_duplicates_keeps_the_gap(taxonomy) -> None:
    telemetry = generate_telemetry(SynthConfig(duplicates_per_segment=1))
    space = assign_segments(telemetry.frame.columns, taxonomy)
    canonical, _ = apply_pipeline(telemetry.frame, space, taxonomy)
    result = run_pruning(canonical.frame, space.analysis_segments(), 0.95, taxonomy.keep_list)

    assert result.post_report.delta >= 0.6 * result.pre_report.delta
    assert result.post_report.utest.p_value < 0.001
    assert result.quasi_invariance()["icor_change"] < 0.05


def test_residual_risk_exceeds_canonical_in_every_cell(default_comparison) -> None:
    gaps = default_comparison.report.gaps(RESIDUAL, CANONICAL)

    assert len(gaps) == EvaluationConfig().n_cells
    losing = [row for row in gaps if not row["gap"] > 0]
    assert losing == []


def test_residual_space_is_marginal(default_comparison) -> None:
    cells = default_comparison.report.cells_for(RESIDUAL)

    by_model_horizon = {}
    for cell in cells:
        if cell.auc is not None:
            by_model_horizon.setdefault((cell.model, cell.horizon_delta), []).append(cell.auc)
    assert len(by_model_horizon) == 3 * 2
    for key, values in by_model_horizon.items():
        assert 0.4 <= np.mean(values) <= 0.6, key

    for cell in cells:
        for fold in cell.folds:
            assert fold.risk >= 0.9 * fold.baseline_risk, (cell.key, fold.fold)


def test_residual_predictions_are_conditionally_marginal(default_comparison) -> None:
    values = [c.mean_correlation for c in default_comparison.report.conditional if c.mean_correlation is not None]

    assert values
    assert abs(np.mean(values)) < 0.2


def test_pca_matches_canonical_and_full_space_does_not_win(default_comparison) -> None:
    table = default_comparison.table()

    assert abs(table[CANONICAL] - table[PCA]) < 0.05
    assert table[FULL] >= table[CANONICAL] - 0.02
