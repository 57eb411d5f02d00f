"""Structured solver for the general 30-parameter linear equation of a rank-3 tensor in 4D."""

from .oracle import SingularOperatorError, apply_lhs, build_operator, oracle_solve
from .parameters import PARAM_NAMES, ParameterSet, identity_params, random_params
from .solver import SolveConfig, SolveReport, batch_solve, residual, solve
from .tensor_core import LeviCivita, Metric
from .trace_system import DegenerateSystemError

__version__ = "0.1.0"

__all__ = [
    "DegenerateSystemError",
    "LeviCivita",
    "Metric",
    "PARAM_NAMES",
    "ParameterSet",
    "SingularOperatorError",
    "SolveConfig",
    "SolveReport",
    "apply_lhs",
    "batch_solve",
    "build_operator",
    "identity_params",
    "oracle_solve",
    "random_params",
    "residual",
    "solve",
]
