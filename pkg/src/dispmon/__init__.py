"""Reference-free structural displacement monitoring.

Reconstructs displacement time histories from streamed accelerometer data
with a regularized FIR filter, persists them in a two-table store, serves
them over a polling HTTP API, and validates the whole pipeline against
analytic oracles.
"""

from .recon import (
    AccelerationSeries,
    CoefficientMatrix,
    DisplacementSeries,
    ReconstructionConfig,
    StreamingReconstructor,
    Weighting,
    coefficient_matrix,
    max_abs_displacement,
    reconstruct_batch,
    regularization_factor,
    second_difference_operator,
)
from .service import DisplacementView, ServiceConfig, SeverityClass, classify_severity
from .store import Store

__all__ = [
    "AccelerationSeries",
    "CoefficientMatrix",
    "DisplacementSeries",
    "DisplacementView",
    "ReconstructionConfig",
    "ServiceConfig",
    "SeverityClass",
    "Store",
    "StreamingReconstructor",
    "Weighting",
    "classify_severity",
    "coefficient_matrix",
    "max_abs_displacement",
    "reconstruct_batch",
    "regularization_factor",
    "second_difference_operator",
]
