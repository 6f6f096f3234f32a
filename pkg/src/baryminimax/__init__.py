"""Constrained rational minimax approximation by a barycentric dual Lawson iteration."""

__version__ = "0.1.0"

from .barycentric import (  # noqa: E402
    BarycentricRational,
    InterpolationData,
    SampleSet,
    SupportPoints,
    assemble_from_coefficients,
    evaluate,
    evaluate_on_samples,
)
from .diagnostics import duality_certificate, error_report, extreme_points, theorem_bound_check  # noqa: E402
from .dual import build_basis, constraint_matrix_apply, dual_value_fast, dual_value_oracle  # noqa: E402
from .lawson import LawsonConfig, SolveResult, initialize_weights, lawson_update, select_support_points, solve  # noqa: E402

__all__ = [
    "BarycentricRational",
    "InterpolationData",
    "LawsonConfig",
    "SampleSet",
    "SolveResult",
    "SupportPoints",
    "assemble_from_coefficients",
    "build_basis",
    "constraint_matrix_apply",
    "dual_value_fast",
    "dual_value_oracle",
    "duality_certificate",
    "error_report",
    "evaluate",
    "evaluate_on_samples",
    "extreme_points",
    "initialize_weights",
    "lawson_update",
    "select_support_points",
    "solve",
    "theorem_bound_check",
]
