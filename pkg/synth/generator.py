"""Seeded synthetic telemetry with segment-coordinated latent dynamics.

Every canonical segment is driven by one AR(1) latent.  Feature ``j`` of a
segment observes ``loading_j * latent + noise`` through an emission that
matches the segment's semantics (cumulative counters, heavy-tailed latencies,
queue depths, connection counters, memory gauges, table structure), so the
segment transforms have realistic input.  Residual features are independent
white noise plus a slow sinusoidal drift.

Faults are logged ``fault_lead`` seconds after the designated latent crosses
``fault_threshold`` from below.  At the fault the latent is reset to
``recovery_level`` (remediation), and it must sit below
``fault_threshold - FAULT_HYSTERESIS`` before the next crossing counts.
With ``recovery_level=None`` the latent is left untouched.

The pseudo-random source is NumPy's PCG64 bit generator, reached through
``numpy.random.default_rng(seed)``.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from config import SEMSEG_SEED
from errors import ConfigError
from prediction.labels import FaultEvent, FaultLog
from synth.names import CANONICAL_POOLS, RESIDUAL_POOLS
from taxonomy.schema import GroupSpec, SegmentTaxonomy, default_taxonomy

logger = logging.getLogger(__name__)

#: 2025-12-12T00:00:00Z
DEFAULT_START = 1765497600
FAULT_HYSTERESIS = 0.5
MIN_SAMPLES = 100


@dataclass(frozen=True)
class SegmentSpec:
    name: str
    n_features: int = 4
    loading_range: Tuple[float, float] = (0.6, 1.0)
    noise_std: float = 0.4

    def duplicates_needed(self, duplicates: int) -> int:
        """Planted duplicates for this segment; at most one per feature."""
        return min(duplicates, self.n_features)


def _default_segments() -> Tuple[SegmentSpec, ...]:
    return tuple(SegmentSpec(name) for name in CANONICAL_POOLS)


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of :func:`generate_telemetry`."""

    n_samples: int = 5000
    cadence: int = 30
    segments: Tuple[SegmentSpec, ...] = field(default_factory=_default_segments)
    n_residual: int = 20
    latent_persistence: float = 0.95
    fault_latent_index: int = 1
    fault_threshold: float = 1.8
    fault_lead: int = 120
    recovery_level: Optional[float] = 0.0
    duplicates_per_segment: int = 0
    missing_rate: float = 0.0
    drift_amplitude: float = 0.3
    start: int = DEFAULT_START
    seed: int = SEMSEG_SEED

    def __post_init__(self) -> None:
        object.__setattr__(self, "segments", tuple(self.segments))
        if self.n_samples < MIN_SAMPLES:
            raise ConfigError(f"n_samples must be >= {MIN_SAMPLES}, got {self.n_samples}")
        if self.cadence < 1:
            raise ConfigError(f"cadence must be >= 1 second, got {self.cadence}")
        if not self.segments:
            raise ConfigError("at least one segment is required")
        if self.n_residual < 1:
            raise ConfigError(f"n_residual must be >= 1, got {self.n_residual}")
        if not 0.0 <= self.latent_persistence < 1.0:
            raise ConfigError(f"latent_persistence must lie in [0, 1), got {self.latent_persistence}")
        if not 0 <= self.fault_latent_index < len(self.segments):
            raise ConfigError(f"fault_latent_index {self.fault_latent_index} is out of range")
        if self.fault_lead < 0:
            raise ConfigError(f"fault_lead must be non-negative, got {self.fault_lead}")
        if self.duplicates_per_segment < 0:
            raise ConfigError(f"duplicates_per_segment must be >= 0, got {self.duplicates_per_segment}")
        if not 0.0 <= self.missing_rate < 1.0:
            raise ConfigError(f"missing_rate must lie in [0, 1), got {self.missing_rate}")
        if self.drift_amplitude < 0:
            raise ConfigError(f"drift_amplitude must be non-negative, got {self.drift_amplitude}")

        names = [s.name for s in self.segments]
        if len(set(names)) != len(names):
            raise ConfigError(f"segment names must be unique, got {names}")
        for spec in self.segments:
            pool = CANONICAL_POOLS.get(spec.name)
            if pool is None:
                raise ConfigError(f"no metric names for segment {spec.name!r}; known: {sorted(CANONICAL_POOLS)}")
            if spec.n_features < 1:
                raise ConfigError(f"segment {spec.name!r} needs at least one feature")
            if spec.duplicates_needed(self.duplicates_per_segment) + spec.n_features > len(pool):
                raise ConfigError(f"segment {spec.name!r} has only {len(pool)} metric names")
            low, high = spec.loading_range
            if not 0 < low <= high:
                raise ConfigError(f"segment {spec.name!r} has an invalid loading range {spec.loading_range}")
            if spec.noise_std < 0:
                raise ConfigError(f"segment {spec.name!r} has a negative noise_std")
        per_family = -(-self.n_residual // len(RESIDUAL_POOLS))
        if per_family > min(len(p) for p in RESIDUAL_POOLS.values()):
            raise ConfigError(f"at most {len(RESIDUAL_POOLS) * 8} residual features are supported")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["segments"] = [asdict(s) for s in self.segments]
        return data


@dataclass
class SyntheticTelemetry:
    """Generated wide frame, its fault log and the ground-truth taxonomy."""

    frame: pd.DataFrame
    faults: FaultLog
    ground_truth: SegmentTaxonomy
    latents: pd.DataFrame
    config: SynthConfig

    def __iter__(self):
        return iter((self.frame, self.faults, self.ground_truth))


def _ar1(rng: np.random.Generator, n: int, phi: float) -> np.ndarray:
    """Stationary unit-variance AR(1) path."""
    innovations = rng.standard_normal(n) * np.sqrt(1.0 - phi**2)
    path = np.empty(n)
    path[0] = rng.standard_normal()
    for t in range(1, n):
        path[t] = phi * path[t - 1] + innovations[t]
    return path


def _emit(segment: str, signal: np.ndarray, scale: float, cadence: int) -> np.ndarray:
    """Map a unit-scale driver to raw observations for ``segment``."""
    if segment == "Cumulative":
        return np.cumsum(np.maximum(0.0, 15.0 + 3.0 * signal) * scale)
    if segment == "Network":
        return np.cumsum(np.maximum(0.0, 20.0 + 4.0 * signal) * scale * cadence / 30.0)
    if segment == "Latency":
        return 5.0 * scale * np.exp(0.5 * signal)
    if segment == "Pressure":
        return 20.0 * scale * np.maximum(0.05, 1.0 + 0.2 * signal)
    if segment == "State":
        return 2.0e8 * scale * (1.0 + 0.05 * signal)
    return 30.0 * scale * np.maximum(0.05, 1.0 + 0.15 * signal)


def _residual_values(family: str, noise: np.ndarray, drift: np.ndarray, scale: float) -> np.ndarray:
    driver = noise + drift
    if family == "Ratio & bounded":
        return np.clip(0.5 + 0.1 * driver, 0.0, 1.0)
    if family == "Size & volume":
        return 1.0e4 * scale * np.maximum(0.01, 1.0 + 0.1 * driver)
    if family == "Weak dynamic":
        return 50.0 * scale + 3.0 * driver
    return scale * (1.0 + 0.2 * driver)


def _inject_faults(
    latent: np.ndarray, timestamps: np.ndarray, config: SynthConfig
) -> Tuple[np.ndarray, List[FaultEvent]]:
    """Log faults on upcrossings of ``latent`` and apply the recovery resets.

    The path is replayed from its own innovations so that a reset at a fault
    propagates through the AR(1) recursion.  Returns the adjusted path and the
    fault events.
    """
    phi = config.latent_persistence
    threshold = config.fault_threshold
    reset = threshold - FAULT_HYSTERESIS
    innovations = latent[1:] - phi * latent[:-1]
    path = latent.copy()
    end = int(timestamps[-1])

    crossings: List[Tuple[int, int]] = []
    armed = path[0] < threshold
    pending: Optional[int] = None
    for t in range(1, path.size):
        path[t] = phi * path[t - 1] + innovations[t - 1]
        if pending is not None and t == pending:
            if config.recovery_level is not None:
                path[t] = config.recovery_level
            pending = None
        if armed and pending is None and path[t - 1] < threshold <= path[t]:
            armed = False
            when = int(timestamps[t]) + config.fault_lead
            if when <= end:
                crossings.append((t, when))
                pending = max(int(np.searchsorted(timestamps, when, side="left")), t + 1)
        elif not armed and pending is None and path[t] < reset:
            armed = True

    events = []
    for t, when in crossings:
        stop = t
        while stop < path.size and path[stop] >= threshold and timestamps[stop] < when:
            stop += 1
        events.append(FaultEvent(when, round(float(path[t:max(stop, t + 1)].max()), 3)))
    return path, events


def _ground_truth(
    canonical: Dict[str, List[str]], residual: Dict[str, List[str]]
) -> SegmentTaxonomy:
    base = default_taxonomy()
    segments = tuple(
        GroupSpec(name, base.segment(name).transform, base.segment(name).normalization, tuple(cols))
        for name, cols in canonical.items()
    )
    families = tuple(
        GroupSpec(name, base.family(name).transform, base.family(name).normalization, tuple(cols))
        for name, cols in residual.items()
        if cols
    )
    columns = {c for cols in canonical.values() for c in cols}
    return SegmentTaxonomy(segments, families, frozenset(base.keep_list & columns))


def generate_telemetry(config: Optional[SynthConfig] = None) -> SyntheticTelemetry:
    """Generate a wide frame, a fault log and the ground-truth segment map.

    The result unpacks as ``frame, faults, ground_truth``.  Planted duplicates
    (``duplicates_per_segment``) mirror the driver of an existing feature with
    a tiny independent perturbation.
    """
    config = config or SynthConfig()
    rng = np.random.default_rng(config.seed)
    n = config.n_samples
    timestamps = config.start + config.cadence * np.arange(n, dtype=np.int64)

    latents = np.column_stack([_ar1(rng, n, config.latent_persistence) for _ in config.segments])
    latents[:, config.fault_latent_index], events = _inject_faults(
        latents[:, config.fault_latent_index], timestamps, config
    )
    columns: Dict[str, np.ndarray] = {}
    canonical: Dict[str, List[str]] = {}
    for i, spec in enumerate(config.segments):
        pool = CANONICAL_POOLS[spec.name]
        low, high = spec.loading_range
        drivers = []
        names = []
        for j in range(spec.n_features):
            loading = rng.uniform(low, high)
            drivers.append(loading * latents[:, i] + spec.noise_std * rng.standard_normal(n))
            names.append(pool[j])
        for d in range(spec.duplicates_needed(config.duplicates_per_segment)):
            drivers.append(drivers[d] + 1e-3 * rng.standard_normal(n))
            names.append(pool[spec.n_features + d])
        for name, driver in zip(names, drivers):
            columns[name] = _emit(spec.name, driver, rng.uniform(1.0, 5.0), config.cadence)
        canonical[spec.name] = names

    residual: Dict[str, List[str]] = {family: [] for family in RESIDUAL_POOLS}
    families = list(RESIDUAL_POOLS)
    t = np.arange(n)
    for r in range(config.n_residual):
        family = families[r % len(families)]
        name = RESIDUAL_POOLS[family][r // len(families)]
        period = rng.uniform(0.25, 1.0) * n
        phase = rng.uniform(0.0, 2.0 * np.pi)
        drift = config.drift_amplitude * np.sin(2.0 * np.pi * t / period + phase)
        columns[name] = _residual_values(family, rng.standard_normal(n), drift, rng.uniform(1.0, 5.0))
        residual[family].append(name)

    frame = pd.DataFrame(columns, index=pd.Index(timestamps, name="timestamp"))
    frame = frame.reindex(columns=sorted(frame.columns))
    if config.missing_rate > 0:
        mask = rng.random(frame.shape) < config.missing_rate
        # Keep the first and last rows complete so every column stays observed.
        mask[0, :] = False
        mask[-1, :] = False
        frame = frame.mask(mask)

    faults = FaultLog(tuple(events))
    if not events:
        logger.warning("Synthetic run produced no fault events; lower fault_threshold or raise n_samples")
    logger.info(
        "Generated %d samples x %d columns with %d fault(s) (seed %d)",
        n,
        frame.shape[1],
        len(faults),
        config.seed,
    )
    latent_frame = pd.DataFrame(
        latents, index=frame.index, columns=[s.name for s in config.segments]
    )
    return SyntheticTelemetry(frame, faults, _ground_truth(canonical, residual), latent_frame, config)
