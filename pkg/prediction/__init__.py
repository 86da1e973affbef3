"""Fault-horizon prediction: labels, time splits, models and risk evaluation."""

from .labels import (  # noqa: F401
    FaultEvent,
    FaultLog,
    LabeledDataset,
    aggregate_frame,
    label_horizon,
    load_fault_log,
    native_cadence,
    write_fault_log,
)
from .splits import Fold, time_splits  # noqa: F401
from .models import BOOSTED, FOREST, LOGISTIC, MODEL_KINDS, ModelSpec, fit_predict  # noqa: F401
from .metrics import ConditionalCorrelation, auc, baseline_risk, conditional_high_risk_corr, log_loss  # noqa: F401
from .evaluation import (  # noqa: F401
    CANONICAL,
    RESIDUAL,
    EvaluationConfig,
    Representation,
    RiskCell,
    RiskReport,
    evaluate_decomposition,
    evaluate_representations,
)

__all__ = [
    "FaultEvent",
    "FaultLog",
    "LabeledDataset",
    "aggregate_frame",
    "label_horizon",
    "load_fault_log",
    "native_cadence",
    "write_fault_log",
    "Fold",
    "time_splits",
    "BOOSTED",
    "FOREST",
    "LOGISTIC",
    "MODEL_KINDS",
    "ModelSpec",
    "fit_predict",
    "ConditionalCorrelation",
    "auc",
    "baseline_risk",
    "conditional_high_risk_corr",
    "log_loss",
    "CANONICAL",
    "RESIDUAL",
    "EvaluationConfig",
    "Representation",
    "RiskCell",
    "RiskReport",
    "evaluate_decomposition",
    "evaluate_representations",
]
