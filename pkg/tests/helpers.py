"""Shared test fixtures: degenerate problems the library does not ship."""

import numpy as np

from amfrk import GridSpec, SemidiscreteProblem, SplitOperator
from amfrk.splitops import DirectionStencil


def scalar_problem(lam) -> SemidiscreteProblem:
    """Single-unknown linear system y' = lam * y (lam may be complex).

    Built directly from a one-point 1-D grid so the whole integrator stack
    (residual, factored solves, corrector) runs on a problem whose exact
    step behavior is known in closed form.
    """
    grid = GridSpec(dim=1, n_cells=2)
    stencil = DirectionStencil(sub=0.0, diag=lam, sup=0.0)
    op = SplitOperator(grid=grid, stencils=(stencil,))
    dtype = complex if np.iscomplexobj(lam) else float
    zero = np.zeros(1, dtype=dtype)
    return SemidiscreteProblem(
        op=op,
        epsilon=0.0,
        beta=0.0,
        dim=1,
        forcing=lambda t: zero,
        exact=None,
    )


def frozen_forcing_problem(problem: SemidiscreteProblem) -> SemidiscreteProblem:
    """Same operator as ``problem`` but with the forcing pinned to zero,
    so one step is a pure linear map of the state."""
    zero = np.zeros(problem.op.grid.m)
    return SemidiscreteProblem(
        op=problem.op,
        epsilon=problem.epsilon,
        beta=problem.beta,
        dim=problem.dim,
        forcing=lambda t: zero,
        exact=None,
    )
