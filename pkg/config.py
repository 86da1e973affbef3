"""Configuration module for the segmentation toolkit.

This module centralises the loading of environment variables used across the
project.  Values are read from the process environment at import time.  If a
variable is not set, or cannot be parsed, a sensible default is used instead
of raising an exception so that the application can always initialise; every
default can also be overridden by the matching command line flag.
"""

from __future__ import annotations

import logging
import os
from pathlib import Path

logger = logging.getLogger(__name__)

PROJECT_ROOT: Path = Path(__file__).resolve().parent

#: Version recorded in every run manifest.
PROJECT_VERSION: str = "0.1.0"


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name, "")
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning("Ignoring malformed %s=%r, using %s", name, raw, default)
        return default


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name, "")
    if not raw:
        return default
    try:
        return float(raw)
    except ValueError:
        logger.warning("Ignoring malformed %s=%r, using %s", name, raw, default)
        return default


#: Seed used by every stochastic stage (shift test, model ensembles, synthetic
#: generator) when ``--seed`` is not given on the command line.
SEMSEG_SEED: int = _env_int("SEMSEG_SEED", 7)

#: Root logger level configured by :mod:`main`.  Logs always go to stderr.
SEMSEG_LOG_LEVEL: str = os.getenv("SEMSEG_LOG_LEVEL", "INFO").upper()

#: Columns whose fraction of missing cells exceeds this value are dropped
#: during cleaning.
SEMSEG_MAX_MISSING: float = _env_float("SEMSEG_MAX_MISSING", 0.5)

#: Rolling-median window (in samples) used by the BSR and RBDR transforms.
SEMSEG_WINDOW: int = _env_int("SEMSEG_WINDOW", 12)

#: Stabiliser added to baseline denominators in BSR, GBD and RBDR.
SEMSEG_EPSILON: float = _env_float("SEMSEG_EPSILON", 1e-6)

#: Absolute Spearman correlation at or above which two features of the same
#: segment are treated as redundant by the pruning operator.
SEMSEG_TAU_RED: float = _env_float("SEMSEG_TAU_RED", 0.95)

#: Number of circular-shift repetitions in the temporal perturbation test.
SEMSEG_SHIFT_REPEATS: int = _env_int("SEMSEG_SHIFT_REPEATS", 20)

#: Quantile of canonical predictions used as the high-risk threshold.
SEMSEG_THETA_Q: float = _env_float("SEMSEG_THETA_Q", 0.9)

#: Taxonomy document used when ``--taxonomy`` is omitted.
SEMSEG_TAXONOMY: str = os.getenv(
    "SEMSEG_TAXONOMY", str(PROJECT_ROOT / "taxonomy" / "default_taxonomy.json")
)

#: Directory holding the published JSON schemas for every emitted report.
SCHEMA_DIR: Path = PROJECT_ROOT / "schemas"

__all__ = [
    "PROJECT_ROOT",
    "PROJECT_VERSION",
    "SEMSEG_SEED",
    "SEMSEG_LOG_LEVEL",
    "SEMSEG_MAX_MISSING",
    "SEMSEG_WINDOW",
    "SEMSEG_EPSILON",
    "SEMSEG_TAU_RED",
    "SEMSEG_SHIFT_REPEATS",
    "SEMSEG_THETA_Q",
    "SEMSEG_TAXONOMY",
    "SCHEMA_DIR",
]
