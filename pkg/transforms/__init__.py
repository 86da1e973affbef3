"""Semantic transforms, normalizations and the column pipeline."""

from .semantic import (  # noqa: F401
    RollingBaseline,
    apply_semantic,
    rolling_median,
    transform_bsr,
    transform_gbd,
    transform_ltc,
    transform_mcr,
    transform_network_rate,
    transform_rbdr,
    transform_warmup,
)
from .normalize import (  # noqa: F401
    RobustParameters,
    conditional_zscore,
    log1p_normalize,
    normalize,
    robust_parameters,
    robust_scale,
)
from .residual import residual_transform, transform_residual  # noqa: F401
from .dispatcher import TransformedFrame, apply_pipeline  # noqa: F401

__all__ = [
    "RollingBaseline",
    "apply_semantic",
    "rolling_median",
    "transform_bsr",
    "transform_gbd",
    "transform_ltc",
    "transform_mcr",
    "transform_network_rate",
    "transform_rbdr",
    "transform_warmup",
    "RobustParameters",
    "conditional_zscore",
    "log1p_normalize",
    "normalize",
    "robust_parameters",
    "robust_scale",
    "residual_transform",
    "transform_residual",
    "TransformedFrame",
    "apply_pipeline",
]
