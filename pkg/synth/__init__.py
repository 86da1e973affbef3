"""Seeded synthetic telemetry used as ground truth for the analysis pipeline."""

from .generator import SegmentSpec, SynthConfig, SyntheticTelemetry, generate_telemetry  # noqa: F401
from .names import CANONICAL_POOLS, RESIDUAL_POOLS  # noqa: F401

__all__ = [
    "SegmentSpec",
    "SynthConfig",
    "SyntheticTelemetry",
    "generate_telemetry",
    "CANONICAL_POOLS",
    "RESIDUAL_POOLS",
]
