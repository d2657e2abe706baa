"""Directionally split second-order finite-difference operators on the unit box.

The semidiscrete Jacobian J = J_1 + ... + J_d is a sum of one-direction
operators, each acting tridiagonally along its own grid axis (Kronecker
structure, x fastest).  Everything the integrator needs is here: applying a
direction or the full sum, factoring and solving the shifted one-direction
systems (I - sigma*J_j) with a batched Thomas sweep, and the closed-form
direction eigenvalues used by the stability analysis.

Dense matrix assembly is provided as a test oracle only and refuses grids
finer than 16 cells per axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np


class FactorSolveError(RuntimeError):
    """Tridiagonal factorization hit a vanishing pivot."""


class SizeGuardError(RuntimeError):
    """Dense oracle requested on a grid too large for dense assembly."""


_DENSE_LIMIT = 16  # max cells per axis for the dense oracles


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on the unit interval/square/cube.

    dim : number of space dimensions (1 is allowed for degenerate test use)
    n_cells : cells per axis, N; mesh width h = 1/N; unknowns live at the
        N-1 interior points per axis.

    Flat state vectors of length m = (N-1)**dim are ordered x fastest:
    index = (i-1) + (j-1)*(N-1) + (k-1)*(N-1)**2 for the point (i*h, j*h, k*h).
    """

    dim: int
    n_cells: int

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.n_cells < 2:
            raise ValueError(f"need at least 2 cells per axis, got {self.n_cells}")

    @property
    def h(self) -> float:
        return 1.0 / self.n_cells

    @property
    def n_interior(self) -> int:
        return self.n_cells - 1

    @property
    def m(self) -> int:
        return self.n_interior**self.dim

    @property
    def shape(self) -> tuple[int, ...]:
        """Multi-index shape, slowest axis first (z, y, x)."""
        return (self.n_interior,) * self.dim

    def axis_of_direction(self, j: int) -> int:
        """Array axis of direction j (0 = x) in the ``shape`` ordering."""
        return self.dim - 1 - j


@dataclass(frozen=True)
class DirectionStencil:
    """Constant 3-point stencil of one direction.

    sub, diag, sup : weights of the left neighbor, the point itself and the
        right neighbor; rows of the one-direction matrix are
        (sub, diag, sup) / 1 throughout (already divided by h^2).
    cell_peclet : h*|advection|/diffusion; first-order advection terms wreck
        the sign pattern once this reaches 2, so construction flags it.
    """

    sub: float
    diag: float
    sup: float
    cell_peclet: float = 0.0

    @property
    def peclet_warning(self) -> bool:
        return self.cell_peclet >= 2.0


@dataclass(frozen=True)
class SplitOperator:
    """J = sum of one-direction tridiagonal operators on a GridSpec."""

    grid: GridSpec
    stencils: tuple[DirectionStencil, ...]
    _factors: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if len(self.stencils) != self.grid.dim:
            raise ValueError(
                f"got {len(self.stencils)} stencils for a {self.grid.dim}-D grid"
            )

    @property
    def peclet_warning(self) -> bool:
        return any(st.peclet_warning for st in self.stencils)


def build_split_operator(
    grid: GridSpec,
    diffusion,
    advection=None,
    reaction: float = 0.0,
) -> SplitOperator:
    """Assemble the split operator for  div(D grad u) + a . grad u + kappa*u.

    diffusion : per-direction coefficients, all > 0
    advection : per-direction coefficients (default all zero), discretized
        with central differences
    reaction : scalar kappa, shared equally across the d directions so that
        the one-direction pieces still sum to the full operator

    Direction j stencil: sub = (D_j - h*a_j/2)/h^2, sup = (D_j + h*a_j/2)/h^2,
    diag = (-2*D_j + h^2*kappa/d)/h^2.
    """
    d = grid.dim
    diffusion = [float(v) for v in np.atleast_1d(diffusion)]
    if len(diffusion) == 1 and d > 1:
        diffusion = diffusion * d
    if len(diffusion) != d:
        raise ValueError(f"need {d} diffusion coefficients, got {len(diffusion)}")
    if any(v <= 0.0 for v in diffusion):
        raise ValueError(f"diffusion coefficients must be positive, got {diffusion}")
    if advection is None:
        advection = [0.0] * d
    else:
        advection = [float(v) for v in np.atleast_1d(advection)]
        if len(advection) == 1 and d > 1:
            advection = advection * d
    if len(advection) != d:
        raise ValueError(f"need {d} advection coefficients, got {len(advection)}")
    h = grid.h
    share = float(reaction) / d
    stencils = []
    for dj, aj in zip(diffusion, advection):
        stencils.append(
            DirectionStencil(
                sub=(dj - 0.5 * h * aj) / h**2,
                diag=(-2.0 * dj) / h**2 + share,
                sup=(dj + 0.5 * h * aj) / h**2,
                cell_peclet=h * abs(aj) / dj,
            )
        )
    return SplitOperator(grid=grid, stencils=tuple(stencils))


def _to_lines(op: SplitOperator, j: int, v: np.ndarray, dtype) -> np.ndarray:
    """Copy a flat state to a fresh (n, lines) array, direction j's axis first."""
    grid = op.grid
    arr = v.reshape(grid.shape)
    moved = np.moveaxis(arr, grid.axis_of_direction(j), 0)
    return np.array(moved, dtype=dtype, order="C").reshape(grid.n_interior, -1)


def _from_lines(op: SplitOperator, j: int, lines: np.ndarray) -> np.ndarray:
    grid = op.grid
    moved_shape = (grid.n_interior,) + tuple(
        n for ax, n in enumerate(grid.shape) if ax != grid.axis_of_direction(j)
    )
    arr = np.moveaxis(lines.reshape(moved_shape), 0, grid.axis_of_direction(j))
    return np.ascontiguousarray(arr).reshape(-1)


def apply_direction(op: SplitOperator, j: int, v: np.ndarray) -> np.ndarray:
    """Apply the direction-j operator J_j to a flat state vector."""
    st = op.stencils[j]
    grid = op.grid
    arr = np.asarray(v).reshape(grid.shape)
    ax = grid.axis_of_direction(j)
    out = np.empty(
        grid.shape, dtype=np.result_type(arr.dtype, type(st.diag))
    )
    src = np.moveaxis(arr, ax, 0)
    dst = np.moveaxis(out, ax, 0)
    np.multiply(src, st.diag, out=dst)
    dst[1:] += st.sub * src[:-1]
    dst[:-1] += st.sup * src[1:]
    return out.reshape(-1)


def apply_full(op: SplitOperator, v: np.ndarray) -> np.ndarray:
    """Apply J = J_1 + ... + J_d."""
    out = apply_direction(op, 0, v)
    for j in range(1, op.grid.dim):
        out += apply_direction(op, j, v)
    return out


def apply_pi(op: SplitOperator, sigma: float, v: np.ndarray) -> np.ndarray:
    """Apply the factored shift  prod_j (I - sigma*J_j)  to a flat state."""
    out = np.asarray(v)
    for j in range(op.grid.dim):
        out = out - sigma * apply_direction(op, j, out)
    return out


@dataclass(frozen=True)
class TridiagFactor:
    """Pivot-free LU data of  I - sigma*J_j  along one direction.

    The matrix is tridiagonal with constant bands (lo, d0, up); the factor
    stores the recurrence pivots so repeated solves cost two sweeps of
    vectorized row updates across all grid lines at once.
    """

    sigma: float
    lo: complex
    inv_diag: np.ndarray
    back: np.ndarray  # up / pivot_i, i = 0 .. n-2

    @property
    def n(self) -> int:
        return self.inv_diag.shape[0]


def factor_direction(op: SplitOperator, j: int, sigma: float) -> TridiagFactor:
    """Factor I - sigma*J_j, cached on the operator per (direction, sigma)."""
    key = (j, float(sigma))
    cached = op._factors.get(key)
    if cached is not None:
        return cached
    st = op.stencils[j]
    n = op.grid.n_interior
    lo = -sigma * st.sub
    d0 = 1.0 - sigma * st.diag
    up = -sigma * st.sup
    dtype = np.result_type(type(d0), float)
    piv = np.empty(n, dtype=dtype)
    back = np.empty(max(n - 1, 0), dtype=dtype)
    scale = max(abs(lo), abs(d0), abs(up), 1.0)
    piv[0] = d0
    for i in range(1, n):
        if abs(piv[i - 1]) <= 1e-14 * scale:
            raise FactorSolveError(
                f"vanishing pivot at row {i - 1} factoring direction {j} "
                f"with shift sigma={sigma!r}"
            )
        back[i - 1] = up / piv[i - 1]
        piv[i] = d0 - lo * back[i - 1]
    if abs(piv[n - 1]) <= 1e-14 * scale:
        raise FactorSolveError(
            f"vanishing pivot at row {n - 1} factoring direction {j} "
            f"with shift sigma={sigma!r}"
        )
    fac = TridiagFactor(sigma=float(sigma), lo=lo, inv_diag=1.0 / piv, back=back)
    op._factors[key] = fac
    return fac


def _thomas_solve(fac: TridiagFactor, lines: np.ndarray) -> np.ndarray:
    """Solve for every column of ``lines`` (shape (n, k)) in place."""
    x = lines
    lo = fac.lo
    inv_d = fac.inv_diag
    back = fac.back
    n = x.shape[0]
    x[0] *= inv_d[0]
    if n == 1:
        return x
    tmp = np.empty_like(x[0])
    for i in range(1, n):
        np.multiply(x[i - 1], lo, out=tmp)
        np.subtract(x[i], tmp, out=x[i])
        np.multiply(x[i], inv_d[i], out=x[i])
    for i in range(n - 2, -1, -1):
        np.multiply(x[i + 1], back[i], out=tmp)
        np.subtract(x[i], tmp, out=x[i])
    return x


def solve_direction_factor(
    op: SplitOperator, j: int, sigma: float, rhs: np.ndarray
) -> np.ndarray:
    """Solve (I - sigma*J_j) x = rhs for a flat state vector rhs."""
    if sigma == 0.0:
        return np.asarray(rhs).reshape(-1).copy()
    fac = factor_direction(op, j, sigma)
    dtype = np.result_type(np.asarray(rhs).dtype, fac.inv_diag.dtype)
    lines = _to_lines(op, j, np.asarray(rhs), dtype)
    _thomas_solve(fac, lines)
    return _from_lines(op, j, lines)


def solve_pi(op: SplitOperator, sigma: float, rhs: np.ndarray) -> np.ndarray:
    """Solve  prod_j (I - sigma*J_j) x = rhs  by sweeping the directions.

    The one-direction factors commute, so the sweep order is immaterial; the
    solves run j = 0 .. d-1.  On a 1-D grid this is exactly one tridiagonal
    solve.
    """
    out = np.asarray(rhs)
    for j in range(op.grid.dim):
        out = solve_direction_factor(op, j, sigma, out)
    return out


def direction_eigenvalues(op: SplitOperator, j: int) -> np.ndarray:
    """Eigenvalues of J_j's tridiagonal band:  diag + 2*sqrt(sub*sup)*cos(k*pi/N).

    Requires sub*sup >= 0 (the similarity transform to a symmetric matrix
    breaks down otherwise, which happens past the cell-Peclet limit).
    """
    st = op.stencils[j]
    prod = st.sub * st.sup
    if prod < 0.0:
        raise ValueError(
            f"direction {j} has sub*sup = {prod} < 0; eigenvalues are complex "
            "past the cell-Peclet limit and this closed form does not apply"
        )
    n_cells = op.grid.n_cells
    k = np.arange(1, n_cells)
    return st.diag + 2.0 * math.sqrt(prod) * np.cos(k * np.pi / n_cells)


def _dense_band(op: SplitOperator, j: int) -> np.ndarray:
    st = op.stencils[j]
    n = op.grid.n_interior
    band = np.zeros((n, n), dtype=np.result_type(type(st.diag), float))
    idx = np.arange(n)
    band[idx, idx] = st.diag
    band[idx[1:], idx[:-1]] = st.sub
    band[idx[:-1], idx[1:]] = st.sup
    return band


def dense_direction_matrix(op: SplitOperator, j: int) -> np.ndarray:
    """Dense J_j via Kronecker assembly.  Test oracle; guarded to N <= 16."""
    if op.grid.n_cells > _DENSE_LIMIT:
        raise SizeGuardError(
            f"dense assembly refused for N = {op.grid.n_cells} > {_DENSE_LIMIT}"
        )
    n = op.grid.n_interior
    eye = np.eye(n)
    out = None
    for ax in range(op.grid.dim):  # slowest axis first
        block = _dense_band(op, j) if ax == op.grid.axis_of_direction(j) else eye
        out = block if out is None else np.kron(out, block)
    return out


def dense_operator_matrix(op: SplitOperator) -> np.ndarray:
    """Dense J = sum_j J_j.  Test oracle; guarded to N <= 16."""
    out = dense_direction_matrix(op, 0)
    for j in range(1, op.grid.dim):
        out = out + dense_direction_matrix(op, j)
    return out
