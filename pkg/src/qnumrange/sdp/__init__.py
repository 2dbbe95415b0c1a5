"""Semidefinite programs in span form and the radius / dual-norm instances."""

from .builders import (
    ConditionedInstance,
    build_conditioned_dual_sdp,
    build_conditioned_radius_sdp,
    build_dual_norm_sdp,
    build_radius_sdp,
    complex_radius_problem,
    complex_radius_sdp,
    complex_radius_solve,
    dual_norm,
    dual_norm_sdp,
    embed,
    embed_complex,
    hermitian_basis,
    omega,
    radius_sdp,
    trace_split_basis,
)
from .problem import (
    AffineSpace,
    DependentMatricesError,
    InfeasibleStartError,
    IterationLimitError,
    SdpError,
    SdpProblem,
    SdpSolution,
    SingularSystemError,
    affine_to_constraints,
)
from .solver import DEFAULT_EPS, solve

__all__ = [
    "AffineSpace",
    "ConditionedInstance",
    "DEFAULT_EPS",
    "DependentMatricesError",
    "InfeasibleStartError",
    "IterationLimitError",
    "SdpError",
    "SdpProblem",
    "SdpSolution",
    "SingularSystemError",
    "affine_to_constraints",
    "build_conditioned_dual_sdp",
    "build_conditioned_radius_sdp",
    "build_dual_norm_sdp",
    "build_radius_sdp",
    "complex_radius_problem",
    "complex_radius_sdp",
    "complex_radius_solve",
    "dual_norm",
    "dual_norm_sdp",
    "embed",
    "embed_complex",
    "hermitian_basis",
    "omega",
    "radius_sdp",
    "solve",
    "trace_split_basis",
]
