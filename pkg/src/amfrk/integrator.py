"""Time stepping: inexact-Newton sweeps with directionally factored solves.

One step of the q-sweep integrator on the semilinear system y' = J y + g(t):

    predictor   Y^0 = (y_n, y_n)
    sweep nu    D_i = y_n - Y_i + tau * sum_k a[i,k] (J Y_k + g(t_n + c_k tau))
                r   = (I - low) inv(mix) D        (2x2 acting stage-wise)
                solve prod_j (I - gamma*tau*J_j) E_1 = r_1
                solve prod_j (I - gamma*tau*J_j) E_2 = r_2 + low_coeff * E_1
                Y  += mix E                        (2x2 acting stage-wise)
    corrector   y_{n+1} = varpi*y_n + s_hat . Y^q   (= last stage here)

Each sweep costs two forcing evaluations (hoisted out of the sweep loop),
two applications of J per residual and 2d tridiagonal solves, all with the
single shift gamma*tau, so the factors are built once per step size.

A dense exactly-solved implicit step is included as a reference oracle for
tests; it inherits the N <= 16 guard of the dense assembly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .splitops import apply_full, dense_operator_matrix, solve_pi
from .tableau import AmfScheme, ButcherTableau, extended_scheme


@dataclass(frozen=True)
class StepRecord:
    """Final state of a fixed-step integration run."""

    t: float
    y: np.ndarray
    iterations_applied: int


def _stage_forcings(problem, tab: ButcherTableau, t_n: float, tau: float):
    return [problem.forcing(t_n + ci * tau) for ci in tab.c]


def _residual_from(problem, tab, tau, y_n, stages, forcings):
    a = tab.a
    f = [apply_full(problem.op, stages[i]) + forcings[i] for i in range(len(forcings))]
    out = np.empty_like(stages, dtype=np.result_type(stages, f[0]))
    for i in range(out.shape[0]):
        acc = y_n - stages[i]
        for k in range(out.shape[0]):
            acc = acc + (tau * a[i, k]) * f[k]
        out[i] = acc
    return out


def residual(
    problem,
    tab: ButcherTableau,
    t_n: float,
    tau: float,
    y_n: np.ndarray,
    stages: np.ndarray,
) -> np.ndarray:
    """Stage residual D of the implicit stage system at the given iterate.

    stages : (s, m) array of stage vectors; D = 0 exactly at the implicit
    solution.
    """
    if tau <= 0.0:
        raise ValueError(f"step size must be positive, got {tau}")
    stages = np.asarray(stages)
    if stages.shape != (tab.stages, np.asarray(y_n).shape[0]):
        raise ValueError(
            f"stage block shape {stages.shape} does not match "
            f"({tab.stages}, {np.asarray(y_n).shape[0]})"
        )
    return _residual_from(
        problem, tab, tau, y_n, stages, _stage_forcings(problem, tab, t_n, tau)
    )


def amf_step(
    problem,
    scheme: AmfScheme,
    tab: ButcherTableau,
    t_n: float,
    tau: float,
    y_n: np.ndarray,
    n_sweeps: int | None = None,
    return_stages: bool = False,
):
    """Advance one step of length tau from (t_n, y_n).

    n_sweeps : test facility; extends the scheme by repeating its last sweep
        (production use always runs the scheme's own q sweeps).
    """
    if tau <= 0.0:
        raise ValueError(f"step size must be positive, got {tau}")
    if n_sweeps is not None and n_sweeps != scheme.q:
        scheme = extended_scheme(scheme, n_sweeps)
    op = problem.op
    sigma = scheme.gamma * tau
    y_n = np.asarray(y_n)
    forcings = _stage_forcings(problem, tab, t_n, tau)
    stages = np.array([y_n, y_n], dtype=np.result_type(y_n, forcings[0]))
    for it in scheme.iterations:
        d = _residual_from(problem, tab, tau, y_n, stages, forcings)
        s, l = it.mix_coeff, it.low_coeff
        r1 = d[0] - s * d[1]
        r2 = (1.0 + l * s) * d[1] - l * d[0]
        e1 = solve_pi(op, sigma, r1)
        e2 = solve_pi(op, sigma, r2 + l * e1)
        stages[0] += e1 + s * e2
        stages[1] += e2
    y_next = tab.varpi * y_n + tab.s_hat @ stages
    if return_stages:
        return y_next, stages
    return y_next


def irk_reference_step(
    problem,
    tab: ButcherTableau,
    t_n: float,
    tau: float,
    y_n: np.ndarray,
    return_stages: bool = False,
):
    """Exactly solved implicit step via one dense (s*m) x (s*m) solve.

    Test oracle for the sweep iteration; refuses grids past the dense limit
    (through dense_operator_matrix).
    """
    if tau <= 0.0:
        raise ValueError(f"step size must be positive, got {tau}")
    jac = dense_operator_matrix(problem.op)
    m = jac.shape[0]
    s = tab.stages
    y_n = np.asarray(y_n)
    forcings = _stage_forcings(problem, tab, t_n, tau)
    rhs = np.concatenate(
        [y_n + tau * sum(tab.a[i, k] * forcings[k] for k in range(s)) for i in range(s)]
    )
    big = np.eye(s * m, dtype=np.result_type(jac, rhs)) - tau * np.kron(tab.a, jac)
    flat = np.linalg.solve(big, rhs)
    stages = flat.reshape(s, m)
    y_next = tab.varpi * y_n + tab.s_hat @ stages
    if return_stages:
        return y_next, stages
    return y_next


def integrate(
    problem,
    scheme: AmfScheme,
    tab: ButcherTableau,
    tau: float,
    t_end: float,
    y0: np.ndarray | None = None,
) -> StepRecord:
    """Run fixed steps from t = 0 to t_end; tau must divide t_end exactly.

    The initial state defaults to the problem's exact solution at t = 0.
    """
    if tau <= 0.0:
        raise ValueError(f"step size must be positive, got {tau}")
    ratio = t_end / tau
    n_steps = int(round(ratio))
    if abs(ratio - n_steps) > 1e-12 * max(1.0, abs(ratio)):
        raise ValueError(
            f"t_end = {t_end} is not an integer number of steps of tau = {tau}"
        )
    if y0 is None:
        if problem.exact is None:
            raise ValueError("problem has no exact solution; pass y0 explicitly")
        y = np.asarray(problem.exact(0.0)).copy()
    else:
        y = np.asarray(y0).copy()
    for n in range(n_steps):
        y = amf_step(problem, scheme, tab, n * tau, tau, y)
    return StepRecord(t=n_steps * tau, y=y, iterations_applied=scheme.q * n_steps)
