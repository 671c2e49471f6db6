"""Jacobi Petrov-Galerkin spectral solver for two-sided fractional
diffusion, advection, reaction problems on (0, 1), with a convergence-study
harness."""

from .analysis import (
    ConvergenceReport,
    ExperimentError,
    ExperimentSpec,
    error_norms,
    fit_rate,
    predicted_rates,
    run_experiment,
)
from .quadrature import QuadRule, composite, gauss_legendre, integrate
from .solver import (
    Constant,
    PiecewiseConstant,
    Polynomial,
    ProblemSpec,
    Solution,
    assemble,
    evaluate_u,
    solve,
    solve_problem,
)
from .spectral import Expansion, analyze, sobolev_norm, synthesize
from .special_fn import (
    FractionalParams,
    JacobiBasis,
    fractional_params,
    jacobi_deriv,
    jacobi_eval,
    jacobi_norm,
    log_gamma,
    solve_beta,
)

__version__ = "0.1.0"

__all__ = [
    "QuadRule",
    "composite",
    "gauss_legendre",
    "integrate",
    "Expansion",
    "analyze",
    "sobolev_norm",
    "synthesize",
    "ConvergenceReport",
    "ExperimentError",
    "ExperimentSpec",
    "error_norms",
    "fit_rate",
    "predicted_rates",
    "run_experiment",
    "Constant",
    "PiecewiseConstant",
    "Polynomial",
    "ProblemSpec",
    "Solution",
    "assemble",
    "evaluate_u",
    "solve",
    "solve_problem",
    "FractionalParams",
    "JacobiBasis",
    "fractional_params",
    "jacobi_deriv",
    "jacobi_eval",
    "jacobi_norm",
    "log_gamma",
    "solve_beta",
]
