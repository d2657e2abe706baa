"""Factored-sweep implicit Runge-Kutta integration for split diffusion problems.

The package builds two-stage Radau IIA steps whose implicit stage systems are
never solved exactly: a small fixed number of inexact-Newton sweeps replaces
the stage matrix by a rank-structured approximation with a single eigenvalue,
so each sweep costs one tridiagonal solve per grid direction and stage.
Included: the split finite-difference operators, manufactured 2D/3D diffusion
problems with known solutions, the two-argument stability function with wedge
scans, and a convergence-study harness.
"""

from .harness import ConvergenceRow, StudyConfig, render_table, run_convergence, weighted_norm
from .integrator import StepRecord, amf_step, integrate, irk_reference_step, residual
from .problems import (
    SemidiscreteProblem,
    boundary_vector,
    build_problem,
    exact_solution_on_grid,
    forcing_vector,
)
from .splitops import (
    DirectionStencil,
    FactorSolveError,
    GridSpec,
    SizeGuardError,
    SplitOperator,
    apply_direction,
    apply_full,
    apply_pi,
    build_split_operator,
    dense_direction_matrix,
    dense_operator_matrix,
    direction_eigenvalues,
    factor_direction,
    solve_direction_factor,
    solve_pi,
)
from .stability import (
    ComplexPoint,
    ScanResult,
    combine_zw,
    sampled_sup_ratio,
    splitting_sup_bound,
    stability_function,
    wedge_stability_scan,
)
from .tableau import (
    AmfIteration,
    AmfScheme,
    ButcherTableau,
    amf_scheme,
    extended_scheme,
    radau2a_tableau,
    verify_scheme_conditions,
)

__all__ = [
    "AmfIteration",
    "AmfScheme",
    "ButcherTableau",
    "ComplexPoint",
    "ConvergenceRow",
    "DirectionStencil",
    "FactorSolveError",
    "GridSpec",
    "ScanResult",
    "SemidiscreteProblem",
    "SizeGuardError",
    "SplitOperator",
    "StepRecord",
    "StudyConfig",
    "amf_scheme",
    "amf_step",
    "apply_direction",
    "apply_full",
    "apply_pi",
    "boundary_vector",
    "build_problem",
    "build_split_operator",
    "combine_zw",
    "dense_direction_matrix",
    "dense_operator_matrix",
    "direction_eigenvalues",
    "exact_solution_on_grid",
    "extended_scheme",
    "factor_direction",
    "forcing_vector",
    "integrate",
    "irk_reference_step",
    "radau2a_tableau",
    "render_table",
    "residual",
    "run_convergence",
    "sampled_sup_ratio",
    "solve_direction_factor",
    "solve_pi",
    "splitting_sup_bound",
    "stability_function",
    "verify_scheme_conditions",
    "weighted_norm",
    "wedge_stability_scan",
]
