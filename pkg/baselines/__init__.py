"""Full-space and PCA baselines for the representation comparison."""

from .pca import PcaModel, pca_fit, pca_inverse_transform, pca_projector, pca_transform  # noqa: F401
from .comparison import (  # noqa: F401
    FULL,
    PCA,
    REPRESENTATIONS,
    Comparison,
    SignTest,
    compare_representations,
    full_space,
    sign_test,
)

__all__ = [
    "PcaModel",
    "pca_fit",
    "pca_inverse_transform",
    "pca_projector",
    "pca_transform",
    "FULL",
    "PCA",
    "REPRESENTATIONS",
    "Comparison",
    "SignTest",
    "compare_representations",
    "full_space",
    "sign_test",
]
