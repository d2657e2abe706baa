"""Manufactured diffusion test problems with known exact solutions.

Both problems solve  u_t = eps * laplace(u) + g  on the unit square/cube with
Dirichlet data, where g is chosen so that

    2D:  u = 10 x(1-x) y(1-y) e^t            + beta * exp(2x - y - t)
    3D:  u = 64 x(1-x) y(1-y) z(1-z) e^t     + beta * exp(2x - y - z - t)

is the exact PDE solution.  With beta = 0 the solution is a polynomial in
space, central differences are exact, and the boundary data is constant in
time; beta != 0 switches on time-dependent boundaries and an O(h^2) spatial
error.  The semidiscrete right-hand side is

    y' = J y + forcing(t),
    forcing(t) = g_h(t) + eps * h^-2 * boundary(t),

with J the split central-difference operator (eps folded into its diffusion
coefficients) and boundary(t) the boundary-value vector that the eliminated
Dirichlet data injects next to each face.

Every spatial profile here is a fixed vector scaled by e^t or e^-t, so the
time-dependent vectors cost two axpys per evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .splitops import GridSpec, SplitOperator, build_split_operator


@dataclass(frozen=True)
class SemidiscreteProblem:
    """Linear semidiscrete system  y' = J y + forcing(t).

    forcing : full right-hand-side vector at time t (source plus weighted
        boundary injection)
    exact : grid restriction of the exact PDE solution, or None when no
        closed form is attached
    """

    op: SplitOperator
    epsilon: float
    beta: float
    dim: int
    forcing: Callable[[float], np.ndarray]
    exact: Optional[Callable[[float], np.ndarray]] = None
    _profiles: dict = field(default_factory=dict, repr=False, compare=False)


def _interior(n_cells: int) -> np.ndarray:
    h = 1.0 / n_cells
    return h * np.arange(1, n_cells)


def _spatial_profiles(dim: int, n_cells: int, beta: float, epsilon: float) -> dict:
    """Fixed spatial vectors; keys grow/decay by their time factor e^t / e^-t."""
    t = _interior(n_cells)
    bump = t * (1.0 - t)
    if dim == 2:
        x = t.reshape(1, -1)
        y = t.reshape(-1, 1)
        bx = bump.reshape(1, -1)
        by = bump.reshape(-1, 1)
        amp = 10.0
        exact_grow = amp * bx * by
        source_grow = amp * (bx * by + 2.0 * epsilon * (bx + by))
        ridge = np.exp(2.0 * x - y)
        lap_coeff = 1.0 + 5.0 * epsilon  # laplacian of exp(2x - y) is 5x itself
        boundary = np.zeros_like(ridge)
        boundary[:, 0] += np.exp(-y[:, 0])
        boundary[:, -1] += np.exp(2.0 - y[:, 0])
        boundary[0, :] += np.exp(2.0 * x[0, :])
        boundary[-1, :] += np.exp(2.0 * x[0, :] - 1.0)
    else:
        x = t.reshape(1, 1, -1)
        y = t.reshape(1, -1, 1)
        z = t.reshape(-1, 1, 1)
        bx = bump.reshape(1, 1, -1)
        by = bump.reshape(1, -1, 1)
        bz = bump.reshape(-1, 1, 1)
        amp = 64.0
        exact_grow = amp * bx * by * bz
        source_grow = amp * (
            bx * by * bz + 2.0 * epsilon * (by * bz + bx * bz + bx * by)
        )
        ridge = np.exp(2.0 * x - y - z)
        lap_coeff = 1.0 + 6.0 * epsilon  # laplacian of exp(2x - y - z) is 6x itself
        boundary = np.zeros(np.broadcast_shapes(x.shape, y.shape, z.shape))
        boundary[:, :, 0] += np.exp(-y - z)[:, :, 0]
        boundary[:, :, -1] += np.exp(2.0 - y - z)[:, :, 0]
        boundary[:, 0, :] += np.exp(2.0 * x - z)[:, 0, :]
        boundary[:, -1, :] += np.exp(2.0 * x - 1.0 - z)[:, 0, :]
        boundary[0, :, :] += np.exp(2.0 * x - y)[0, :, :]
        boundary[-1, :, :] += np.exp(2.0 * x - y - 1.0)[0, :, :]
    shape = (n_cells - 1,) * dim
    exact_grow = np.broadcast_to(exact_grow, shape)
    return {
        "exact_grow": np.ravel(exact_grow).copy(),
        "exact_decay": beta * np.ravel(np.broadcast_to(ridge, shape)).copy(),
        "source_grow": np.ravel(np.broadcast_to(source_grow, shape)).copy(),
        "source_decay": -beta * lap_coeff * np.ravel(
            np.broadcast_to(ridge, shape)
        ).copy(),
        "boundary_decay": beta * np.ravel(boundary).copy(),
    }


def build_problem(
    dim: int, n_cells: int, beta: float, epsilon: float = 0.1
) -> SemidiscreteProblem:
    """Assemble the 2D (dim=2) or 3D (dim=3) manufactured diffusion problem."""
    if dim not in (2, 3):
        raise ValueError(f"manufactured problems exist for dim 2 and 3, got {dim}")
    if epsilon <= 0.0:
        raise ValueError(f"diffusion parameter must be positive, got {epsilon}")
    grid = GridSpec(dim=dim, n_cells=n_cells)
    op = build_split_operator(grid, [epsilon] * dim)
    prof = _spatial_profiles(dim, n_cells, float(beta), float(epsilon))
    weight = epsilon / grid.h**2
    src_grow = prof["source_grow"]
    src_decay = prof["source_decay"] + weight * prof["boundary_decay"]
    ex_grow = prof["exact_grow"]
    ex_decay = prof["exact_decay"]

    def forcing(t: float) -> np.ndarray:
        return np.exp(t) * src_grow + np.exp(-t) * src_decay

    def exact(t: float) -> np.ndarray:
        return np.exp(t) * ex_grow + np.exp(-t) * ex_decay

    return SemidiscreteProblem(
        op=op,
        epsilon=float(epsilon),
        beta=float(beta),
        dim=dim,
        forcing=forcing,
        exact=exact,
        _profiles=prof,
    )


def exact_solution_on_grid(problem: SemidiscreteProblem, t: float) -> np.ndarray:
    """Exact PDE solution restricted to the interior grid, flat ordering."""
    if problem.exact is None:
        raise ValueError("problem carries no exact solution")
    return problem.exact(t)


def boundary_vector(problem: SemidiscreteProblem, t: float) -> np.ndarray:
    """Unweighted boundary-value vector: each interior point adjacent to a
    face picks up the exact solution at its off-grid neighbor, summed over
    faces (so points next to edges/corners accumulate several terms)."""
    prof = problem._profiles
    if "boundary_decay" not in prof:
        raise ValueError("problem carries no boundary data")
    # the polynomial part vanishes on every face, only the ridge contributes
    return np.exp(-t) * prof["boundary_decay"]


def forcing_vector(problem: SemidiscreteProblem, t: float) -> np.ndarray:
    """Source plus eps*h^-2 boundary injection; equals problem.forcing(t)."""
    return problem.forcing(t)
