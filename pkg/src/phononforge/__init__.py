"""Heralded orthogonalization and state transformation in truncated Fock space."""

from .channels import (
    HeraldOutcome,
    HeraldSpec,
    apply_herald,
    displaced_ladder_orthogonalize,
    herald_op,
    orthogonalizer,
    qubit_synthesis,
)
from .fock import GaussianSpec, PureState, gaussian_state
from .transform import (
    TransformPlan,
    dimension_match,
    execute_plan,
    factor_plan,
    solve_coefficients,
)
from .wigner import grid_integral, wigner_grid, wigner_point

__version__ = "0.1.0"

__all__ = [
    "GaussianSpec",
    "HeraldOutcome",
    "HeraldSpec",
    "PureState",
    "TransformPlan",
    "apply_herald",
    "dimension_match",
    "displaced_ladder_orthogonalize",
    "execute_plan",
    "factor_plan",
    "gaussian_state",
    "grid_integral",
    "herald_op",
    "orthogonalizer",
    "qubit_synthesis",
    "solve_coefficients",
    "wigner_grid",
    "wigner_point",
]
