"""Command handlers behind the ``semseg`` subcommands.

Each handler takes the parsed :class:`argparse.Namespace`, runs one stage
of the pipeline and writes its reports.  Reports never contain timings or
absolute paths, so repeated runs produce identical bytes; that bookkeeping
goes to ``manifest.json`` instead.
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import os
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from importlib import metadata
from typing import Any, Dict, Iterator, List, Optional

import pandas as pd

from baselines.comparison import compare_representations
from config import PROJECT_VERSION
from ingest import (
    clean_frame,
    frame_to_records,
    load_long_metrics,
    pivot_to_wide,
    read_wide_csv,
    validate_frame,
    write_long_csv,
    write_wide_csv,
)
from output import format_json, save_json, save_table
from prediction.evaluation import EvaluationConfig, evaluate_decomposition
from prediction.labels import load_fault_log, write_fault_log
from prediction.models import ModelSpec
from pruning.reduction import PruneResult, run_pruning
from separability.perturbation import circular_shift_test
from separability.summary import CorrelationReport
from synth.generator import SegmentSpec, SynthConfig, generate_telemetry
from synth.names import CANONICAL_POOLS
from taxonomy import SegmentedSpace, assign_segments, parse_taxonomy, taxonomy_to_dict
from taxonomy.schema import SegmentTaxonomy
from transforms import RollingBaseline, TransformedFrame, apply_pipeline

logger = logging.getLogger(__name__)

PACKAGES = ("numpy", "pandas", "scipy", "scikit-learn", "networkx", "regex", "tqdm", "jsonschema")

METRICS_FILE = "metrics.csv"
FAULTS_FILE = "faults.csv"
GROUND_TRUTH_FILE = "ground_truth.json"
WIDE_FILE = "wide.csv"
MANIFEST_FILE = "manifest.json"


class CommandError(RuntimeError):
    """A command failed in a way the user can fix; carries the exit code."""

    def __init__(self, message: str, exit_code: int = 1) -> None:
        super().__init__(message)
        self.exit_code = exit_code


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _versions() -> Dict[str, Optional[str]]:
    versions: Dict[str, Optional[str]] = {"semseg": PROJECT_VERSION}
    for name in PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = None
    return versions


@dataclass
class RunManifest:
    """Provenance of one command run."""

    command: str
    seed: Optional[int]
    parameters: Dict[str, Any]
    inputs: Dict[str, str] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)

    @property
    def config_digest(self) -> str:
        """SHA-256 over the parameters and input contents, independent of paths and time."""
        payload = {"command": self.command, "parameters": self.parameters, "inputs": sorted(self.inputs.values())}
        return hashlib.sha256(format_json(payload).encode("utf-8")).hexdigest()

    def add_input(self, path: str) -> None:
        self.inputs[str(path)] = _sha256(path)

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = round(time.perf_counter() - start, 6)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "config_digest": self.config_digest,
            "seed": self.seed,
            "parameters": self.parameters,
            "inputs": dict(self.inputs),
            "versions": _versions(),
            "timings": dict(self.timings),
            "outputs": sorted(self.outputs),
        }

    def write(self, out_dir: str) -> str:
        return save_json(self, os.path.join(out_dir, MANIFEST_FILE), kind="manifest")


def _parameters(args: argparse.Namespace, *names: str) -> Dict[str, Any]:
    return {name: getattr(args, name) for name in names if hasattr(args, name)}


# --------------------------------------------------------------------------- synth


def synth_config(args: argparse.Namespace) -> SynthConfig:
    segments = tuple(
        SegmentSpec(name, n_features=args.features_per_segment, noise_std=args.noise_std)
        for name in CANONICAL_POOLS
    )
    return SynthConfig(
        n_samples=args.samples,
        cadence=args.cadence,
        segments=segments,
        n_residual=args.residual,
        fault_threshold=args.fault_threshold,
        fault_lead=args.fault_lead,
        duplicates_per_segment=args.duplicates,
        missing_rate=args.missing_rate,
        seed=args.seed,
    )


def cmd_synth(args: argparse.Namespace) -> int:
    """Write ``metrics.csv``, ``faults.csv`` and ``ground_truth.json``."""
    config = synth_config(args)
    manifest = RunManifest("synth", args.seed, config.to_dict())
    out = args.out
    with manifest.stage("generate"):
        telemetry = generate_telemetry(config)
    with manifest.stage("write"):
        metrics_path = os.path.join(out, METRICS_FILE)
        faults_path = os.path.join(out, FAULTS_FILE)
        truth_path = os.path.join(out, GROUND_TRUTH_FILE)
        write_long_csv(frame_to_records(telemetry.frame), metrics_path)
        write_fault_log(telemetry.faults, faults_path)
        save_json(taxonomy_to_dict(telemetry.ground_truth), truth_path, kind="taxonomy")
    manifest.outputs += [metrics_path, faults_path, truth_path]
    manifest.write(out)
    logger.info("Synthetic telemetry written to %s", out)
    return 0


# --------------------------------------------------------------------------- ingest


def run_ingest(
    input_path: str,
    out_path: str,
    summary_path: str,
    max_missing: float,
    sentinels: List[float],
    manifest: RunManifest,
) -> pd.DataFrame:
    manifest.add_input(input_path)
    with manifest.stage("load"):
        records = load_long_metrics(input_path)
        frame = pivot_to_wide(records)
    with manifest.stage("clean"):
        cleaned, summary = clean_frame(frame, max_missing, sentinels=sentinels)
        validate_frame(cleaned)
    with manifest.stage("write"):
        write_wide_csv(cleaned, out_path)
        document = {
            "load": {
                "n_records": records.summary.n_records,
                "n_skipped": records.summary.n_skipped,
                "skipped_lines": list(records.summary.skipped_lines),
                "n_duplicates": int(frame.attrs.get("n_duplicates", 0)),
            },
            "cleaning": summary.to_dict(),
            "n_rows": len(cleaned.index),
        }
        save_json(document, summary_path, kind="cleaning")
    manifest.outputs += [out_path, summary_path]
    return cleaned


def cmd_ingest(args: argparse.Namespace) -> int:
    """Pivot and clean a long export into a wide CSV plus a cleaning summary."""
    summary_path = args.summary or os.path.splitext(args.out)[0] + "_cleaning.json"
    manifest = RunManifest("ingest", None, _parameters(args, "max_missing", "sentinel"))
    run_ingest(args.input, args.out, summary_path, args.max_missing, args.sentinel, manifest)
    manifest.write(os.path.dirname(os.path.abspath(args.out)))
    return 0


# --------------------------------------------------------------------------- analyze


@dataclass
class PreparedSpaces:
    """Transformed spaces of one frame plus the pruning of its canonical space."""

    space: SegmentedSpace
    canonical: TransformedFrame
    residual: TransformedFrame
    pruning: PruneResult
    taxonomy: SegmentTaxonomy

    @property
    def segments(self) -> Dict[str, List[str]]:
        return self.space.analysis_segments()

    @property
    def pruned_canonical(self) -> pd.DataFrame:
        removed = {r.feature for items in self.pruning.removed.values() for r in items}
        return self.canonical.frame[[c for c in self.canonical.columns if c not in removed]]


def prepare_spaces(frame: pd.DataFrame, args: argparse.Namespace, manifest: RunManifest) -> PreparedSpaces:
    with manifest.stage("segment"):
        taxonomy = parse_taxonomy(args.taxonomy)
        space = assign_segments(frame.columns, taxonomy)
    with manifest.stage("transform"):
        canonical, residual = apply_pipeline(frame, space, taxonomy, RollingBaseline(args.window, args.epsilon))
    with manifest.stage("prune"):
        pruning = run_pruning(canonical.frame, space.analysis_segments(), args.tau_red, taxonomy.keep_list)
    return PreparedSpaces(space, canonical, residual, pruning, taxonomy)


def _separability_document(
    prepared: PreparedSpaces, report: CorrelationReport, shift: Dict[str, Any], args: argparse.Namespace
) -> Dict[str, Any]:
    document = report.to_dict()
    document["shift"] = shift
    document["segmentation"] = prepared.space.to_dict()
    document["provenance"] = {**prepared.canonical.provenance, **prepared.residual.provenance}
    document["degenerate_columns"] = {
        "canonical": prepared.canonical.degenerate_columns(),
        "residual": prepared.residual.degenerate_columns(),
    }
    document["parameters"] = _parameters(args, "window", "epsilon", "tau_red", "shift_repeats", "seed")
    return document


def run_analyze(frame: pd.DataFrame, args: argparse.Namespace, out: str, manifest: RunManifest) -> PreparedSpaces:
    prepared = prepare_spaces(frame, args, manifest)
    report = prepared.pruning.pre_report
    with manifest.stage("shift_test"):
        shift = circular_shift_test(prepared.canonical.frame, prepared.segments, args.shift_repeats, args.seed)
    shift_doc = shift.to_dict()
    shift_doc["delta_original"] = report.delta
    shift_doc["collapse_ratio"] = shift.delta_shift / report.delta if report.delta else None

    with manifest.stage("write"):
        separability = _separability_document(prepared, report, shift_doc, args)
        paths = [
            save_json(separability, os.path.join(out, "separability.json"), kind="separability"),
            save_json(prepared.pruning, os.path.join(out, "pruning.json"), kind="pruning"),
            save_table(
                report.segment_bars(),
                os.path.join(out, "fig_segment_icc.csv"),
                ["segment", "icc", "n_pairs", "icor_micro"],
            ),
        ]
        if args.dump_omegas:
            rows = report.omegas_frame().to_dict("records")
            paths.append(save_table(rows, os.path.join(out, "fig2_omegas.csv"), ["distribution", "rho"]))
    manifest.outputs += paths
    logger.info(
        "ICC_micro %.4f, ICOR_micro %s, delta %s; shifted delta %s",
        report.icc_micro,
        report.icor_micro,
        report.delta,
        shift.delta_shift,
    )
    return prepared


def cmd_analyze(args: argparse.Namespace) -> int:
    """Write ``separability.json``, ``pruning.json`` and the segment bar table."""
    manifest = RunManifest(
        "analyze", args.seed, _parameters(args, "window", "epsilon", "tau_red", "shift_repeats", "dump_omegas")
    )
    manifest.add_input(args.input)
    manifest.add_input(args.taxonomy)
    with manifest.stage("load"):
        frame = read_wide_csv(args.input)
    run_analyze(frame, args, args.out, manifest)
    manifest.write(args.out)
    return 0


# --------------------------------------------------------------------------- evaluate


def evaluation_config(args: argparse.Namespace) -> EvaluationConfig:
    return EvaluationConfig(
        n_splits=tuple(args.splits),
        deltas=tuple(args.deltas),
        windows=tuple(args.windows),
        models=tuple(ModelSpec.default(kind, seed=args.seed) for kind in args.models),
        theta_quantile=args.theta_q,
    )


def _show_progress(args: argparse.Namespace) -> bool:
    return not args.no_progress and sys.stderr.isatty()


def run_evaluate(
    prepared: PreparedSpaces, faults_path: str, args: argparse.Namespace, out: str, manifest: RunManifest
) -> None:
    faults = load_fault_log(faults_path)
    config = evaluation_config(args)
    canonical = prepared.pruned_canonical
    residual = prepared.residual.frame
    with manifest.stage("evaluate"):
        if args.no_baselines:
            report = evaluate_decomposition(canonical, residual, faults, config, progress=_show_progress(args))
            document: Dict[str, Any] = {"report": report.to_dict()}
        else:
            full = pd.concat([prepared.canonical.frame, residual], axis=1)
            comparison = compare_representations(
                canonical,
                residual,
                faults,
                config,
                full=full,
                pca_components=args.pca_components,
                progress=_show_progress(args),
            )
            report = comparison.report
            document = comparison.to_dict()

    with manifest.stage("write"):
        manifest.outputs += [
            save_json(document, os.path.join(out, "risk_report.json"), kind="risk_report"),
            save_table(report.rows(), os.path.join(out, "risk_report.csv")),
            save_table(
                report.gap_rows(),
                os.path.join(out, "fig3_gap.csv"),
                ["model", "n_splits", "horizon_delta", "window", "risk_canonical", "risk_residual", "gap"],
            ),
            save_table(
                report.risk_auc_rows(),
                os.path.join(out, "fig4_risk_auc.csv"),
                ["representation", "model", "n_splits", "horizon_delta", "window", "risk", "auc"],
            ),
            save_table(
                report.conditional_rows(),
                os.path.join(out, "fig5_condcorr.csv"),
                [
                    "model",
                    "n_splits",
                    "horizon_delta",
                    "window",
                    "mean_correlation",
                    "mean_covariance",
                    "pooled_correlation",
                    "pooled_n",
                ],
            ),
        ]
    for name, stats in report.summary().items():
        logger.info("%-9s mean risk %.4f", name, stats["risk"])


def cmd_evaluate(args: argparse.Namespace) -> int:
    """Write ``risk_report.json`` and the flat risk and figure tables."""
    manifest = RunManifest(
        "evaluate",
        args.seed,
        _parameters(
            args, "window", "epsilon", "tau_red", "splits", "deltas", "windows", "models", "theta_q",
            "pca_components", "no_baselines",
        ),
    )
    manifest.add_input(args.input)
    manifest.add_input(args.faults)
    manifest.add_input(args.taxonomy)
    with manifest.stage("load"):
        frame = read_wide_csv(args.input)
    prepared = prepare_spaces(frame, args, manifest)
    run_evaluate(prepared, args.faults, args, args.out, manifest)
    manifest.write(args.out)
    return 0


# --------------------------------------------------------------------------- run


def cmd_run(args: argparse.Namespace) -> int:
    """Chain synth, ingest, analyze and evaluate inside ``--out``."""
    out = args.out
    synth_dir = os.path.join(out, "synth")
    analysis_dir = os.path.join(out, "analysis")
    evaluation_dir = os.path.join(out, "evaluation")

    synth_args = argparse.Namespace(**vars(args))
    synth_args.out = synth_dir
    cmd_synth(synth_args)

    manifest = RunManifest(
        "run",
        args.seed,
        {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "command", "verbose", "no_progress")},
    )
    wide_path = os.path.join(out, WIDE_FILE)
    frame = run_ingest(
        os.path.join(synth_dir, METRICS_FILE),
        wide_path,
        os.path.join(out, "wide_cleaning.json"),
        args.max_missing,
        args.sentinel,
        manifest,
    )
    manifest.add_input(args.taxonomy)
    prepared = run_analyze(frame, args, analysis_dir, manifest)
    faults_path = os.path.join(synth_dir, FAULTS_FILE)
    manifest.add_input(faults_path)
    run_evaluate(prepared, faults_path, args, evaluation_dir, manifest)
    manifest.write(out)
    return 0


COMMANDS = {
    "synth": cmd_synth,
    "ingest": cmd_ingest,
    "analyze": cmd_analyze,
    "evaluate": cmd_evaluate,
    "run": cmd_run,
}


def run_command(args: argparse.Namespace) -> int:
    handler = COMMANDS.get(args.command)
    if handler is None:
        raise CommandError(f"unknown command {args.command!r}")
    return handler(args)
