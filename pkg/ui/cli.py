"""Command line interface for the segmentation toolkit.

This module builds the argument parser used by :mod:`main`.  Keeping
argument parsing separate from the command handlers in :mod:`ui.commands`
makes both easier to test.  Usage errors exit with status 1.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Sequence, Tuple

from config import (
    SEMSEG_EPSILON,
    SEMSEG_MAX_MISSING,
    SEMSEG_SEED,
    SEMSEG_SHIFT_REPEATS,
    SEMSEG_TAU_RED,
    SEMSEG_TAXONOMY,
    SEMSEG_THETA_Q,
    SEMSEG_WINDOW,
)
from prediction.models import MODEL_KINDS
from synth.generator import MIN_SAMPLES

USAGE_EXIT_CODE = 1


class SemsegArgumentParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with status 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT_CODE, f"{self.prog}: error: {message}\n")


def int_range(text: str) -> Tuple[int, ...]:
    """Parse ``"2..9"`` or ``"2,4,6"`` into a tuple of integers."""
    try:
        if ".." in text:
            low, high = (int(part) for part in text.split("..", 1))
            if high < low:
                raise ValueError
            return tuple(range(low, high + 1))
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer range {text!r}") from None


def float_list(text: str) -> Tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def model_list(text: str) -> Tuple[str, ...]:
    kinds = tuple(part.strip().upper() for part in text.split(",") if part.strip())
    unknown = [k for k in kinds if k not in MODEL_KINDS]
    if unknown or not kinds:
        choices = ",".join(k.lower() for k in MODEL_KINDS)
        raise argparse.ArgumentTypeError(f"unknown model(s) {unknown or text!r}; choose from {choices}")
    return kinds


def fraction(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid fraction {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"{value} is not in [0, 1]")
    return value


def open_fraction(text: str) -> float:
    value = fraction(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"{value} is not in (0, 1)")
    return value


def sample_count(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid sample count {text!r}") from None
    if value < MIN_SAMPLES:
        raise argparse.ArgumentTypeError(f"at least {MIN_SAMPLES} samples are required, got {value}")
    return value


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--seed",
        type=int,
        default=SEMSEG_SEED,
        help="Seed for every stochastic stage (env SEMSEG_SEED)",
    )


def _add_synth(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("synthetic telemetry")
    group.add_argument("--samples", type=sample_count, default=5000, help="Number of samples")
    group.add_argument("--cadence", type=int, default=30, help="Seconds between samples")
    group.add_argument("--features-per-segment", type=int, default=4, help="Features per canonical segment")
    group.add_argument("--residual", type=int, default=20, help="Number of residual features")
    group.add_argument("--noise-std", type=float, default=0.4, help="Per-feature noise around the latent")
    group.add_argument("--duplicates", type=int, default=0, help="Planted duplicates per segment")
    group.add_argument("--missing-rate", type=float, default=0.0, help="Fraction of long rows to drop")
    group.add_argument("--fault-threshold", type=float, default=1.8, help="Latent level that triggers a fault")
    group.add_argument("--fault-lead", type=int, default=120, help="Seconds between excursion and fault")


def _add_ingest(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("cleaning")
    group.add_argument(
        "--max-missing",
        type=fraction,
        default=SEMSEG_MAX_MISSING,
        help="Drop columns with a larger fraction of missing cells",
    )
    group.add_argument(
        "--sentinel",
        type=float,
        action="append",
        default=[],
        help="Value meaning 'unavailable'; may be repeated",
    )


def _add_analysis(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("transforms and separability")
    group.add_argument("--taxonomy", default=SEMSEG_TAXONOMY, help="Taxonomy JSON document")
    group.add_argument("--window", type=int, default=SEMSEG_WINDOW, help="Rolling-median window in samples")
    group.add_argument("--epsilon", type=float, default=SEMSEG_EPSILON, help="Baseline stabiliser")
    group.add_argument("--tau-red", type=float, default=SEMSEG_TAU_RED, help="Redundancy threshold in (0, 1]")
    group.add_argument("--shift-repeats", type=int, default=SEMSEG_SHIFT_REPEATS, help="Circular-shift repeats")
    group.add_argument("--dump-omegas", action="store_true", help="Also write fig2_omegas.csv")


def _add_evaluation(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("risk evaluation")
    group.add_argument("--splits", type=int_range, default=tuple(range(2, 10)), help="Split counts, e.g. 2..9")
    group.add_argument("--deltas", type=float_list, default=(300.0, 900.0), help="Horizons in seconds")
    group.add_argument(
        "--windows", type=float_list, default=(300.0, 600.0, 900.0, 1200.0), help="Aggregation windows in seconds"
    )
    group.add_argument(
        "--models", type=model_list, default=MODEL_KINDS, help="Comma-separated: logistic,forest,boosted"
    )
    group.add_argument("--theta-q", type=open_fraction, default=SEMSEG_THETA_Q, help="High-risk quantile")
    group.add_argument("--pca-components", type=int, default=None, help="PCA dimension (default: pruned canonical)")
    group.add_argument("--no-baselines", action="store_true", help="Skip the full-space and PCA baselines")
    group.add_argument("--no-progress", action="store_true", help="Hide the progress bar")


def build_parser() -> argparse.ArgumentParser:
    parser = SemsegArgumentParser(
        prog="semseg",
        description="Semantic segmentation and separability analysis of telemetry",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=SemsegArgumentParser)

    synth = sub.add_parser("synth", help="Generate seeded synthetic telemetry")
    synth.add_argument("--out", required=True, help="Output directory")
    _add_common(synth)
    _add_synth(synth)

    ingest = sub.add_parser("ingest", help="Pivot and clean a long-format export")
    ingest.add_argument("--in", dest="input", required=True, help="Long-format CSV export")
    ingest.add_argument("--out", required=True, help="Wide CSV to write")
    ingest.add_argument("--summary", default=None, help="Cleaning summary JSON (default: next to --out)")
    _add_ingest(ingest)

    analyze = sub.add_parser("analyze", help="Transform, test separability and prune")
    analyze.add_argument("--in", dest="input", required=True, help="Wide CSV written by ingest")
    analyze.add_argument("--out", required=True, help="Output directory")
    _add_common(analyze)
    _add_analysis(analyze)

    evaluate = sub.add_parser("evaluate", help="Compare predictive risk across representations")
    evaluate.add_argument("--in", dest="input", required=True, help="Wide CSV written by ingest")
    evaluate.add_argument("--faults", required=True, help="Fault log CSV (timestamp,magnitude)")
    evaluate.add_argument("--out", required=True, help="Output directory")
    _add_common(evaluate)
    _add_analysis(evaluate)
    _add_evaluation(evaluate)

    run = sub.add_parser("run", help="synth, ingest, analyze and evaluate into one directory")
    run.add_argument("--out", required=True, help="Output directory")
    _add_common(run)
    _add_synth(run)
    _add_ingest(run)
    _add_analysis(run)
    _add_evaluation(run)

    for sp in (synth, ingest, analyze, evaluate, run):
        sp.formatter_class = argparse.ArgumentDefaultsHelpFormatter
    return parser


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Return a populated :class:`argparse.Namespace` for the CLI.

    See the project README for usage examples.
    """
    args = build_parser().parse_args(list(argv) if argv is not None else None)
    if getattr(args, "window", 2) < 2:
        build_parser().error(f"--window must be >= 2, got {args.window}")
    tau = getattr(args, "tau_red", None)
    if tau is not None and not 0.0 < tau <= 1.0:
        build_parser().error(f"--tau-red must lie in (0, 1], got {tau}")
    return args


__all__: List[str] = ["build_parser", "parse_arguments", "int_range", "float_list", "model_list"]
