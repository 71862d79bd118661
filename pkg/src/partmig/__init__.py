"""Partial-migration population models: reproduction numbers, spectral
thresholds and global dynamics of density-dependent stage models."""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    BevertonHolt,
    Constant,
    IsolatedSpec,
    SingleEggSpec,
    TwoEggSpec,
    assemble,
    load_spec,
    validate,
)
from .spectral import classify, dominant_eigenvalue, r0  # noqa: E402

__all__ = [
    "BevertonHolt", "Constant", "IsolatedSpec", "SingleEggSpec", "TwoEggSpec",
    "assemble", "load_spec", "validate", "classify", "dominant_eigenvalue", "r0",
]
