"""Coefficient reconstruction by continuous data assimilation."""

from ._cda import (
    ConfigError,
    EvaluationError,
    SolverFailure,
    __version__,
    command_names,
    forward,
    interpolation_reference,
    problem_names,
    run,
    simulate_ode_bound,
    spearman,
    xi_star,
)

__all__ = [
    "ConfigError",
    "EvaluationError",
    "SolverFailure",
    "__version__",
    "command_names",
    "forward",
    "interpolation_reference",
    "problem_names",
    "run",
    "simulate_ode_bound",
    "spearman",
    "xi_star",
]
