"""Convergence studies: grid/step sequences at fixed tau/h, error digits, orders.

A study runs one scheme over a sequence of mesh resolutions with the step
size tied to the mesh (tau = q*h by default, so every scheme spends the same
number of right-hand-side evaluations per unit time), measures the end-point
global error in the weighted Euclidean norm, and reports

    eps2   = ||exact(t*) - computed(t*)||   (RMS over interior points)
    delta2 = -log10(eps2)                   (significant correct digits)
    p      = (delta2(h/2) - delta2(h)) / log10(2)

with p attached to the coarser of each exactly-halved pair of levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .integrator import integrate
from .problems import build_problem
from .splitops import GridSpec
from .tableau import amf_scheme, radau2a_tableau

_SCHEME_IDS = ("amf1", "amf2", "amf3")


@dataclass(frozen=True)
class StudyConfig:
    """One convergence study: a scheme against a sequence of grids.

    taus : explicit step sizes per grid level; None (default) ties the step
        to the mesh as tau = q*h, which requires each N divisible by q.
    """

    dim: int
    beta: float
    scheme_id: str
    grid_ns: tuple[int, ...]
    epsilon: float = 0.1
    t_end: float = 1.0
    taus: Optional[tuple[float, ...]] = None


@dataclass(frozen=True)
class ConvergenceRow:
    """One grid level of a study; p is None on the last (or non-halved) row."""

    n_cells: int
    h: float
    tau: float
    eps2: float
    delta2: float
    p: Optional[float]


def weighted_norm(v: np.ndarray, grid: GridSpec) -> float:
    """Root-mean-square over the interior points, m^(-1/2) * ||v||_2.

    This is the discrete L2 normalization the reference error tables use;
    it differs from h^(dim/2) * ||v||_2 by the vanishing factor
    ((N-1)/N)^(dim/2).
    """
    v = np.asarray(v)
    return float(np.linalg.norm(v) / math.sqrt(grid.m))


def _normalize_scheme_id(scheme_id: str) -> str:
    sid = scheme_id.strip().lower()
    if sid not in _SCHEME_IDS:
        raise ValueError(
            f"unknown scheme {scheme_id!r}; expected one of {_SCHEME_IDS}"
        )
    return sid


def run_convergence(cfg: StudyConfig) -> list[ConvergenceRow]:
    """Run the study and return one row per grid level, orders attached."""
    sid = _normalize_scheme_id(cfg.scheme_id)
    scheme = amf_scheme(int(sid[-1]))
    tab = radau2a_tableau()
    if cfg.dim not in (2, 3):
        raise ValueError(f"dim must be 2 or 3, got {cfg.dim}")
    if not cfg.grid_ns:
        return []
    if cfg.taus is not None and len(cfg.taus) != len(cfg.grid_ns):
        raise ValueError(
            f"{len(cfg.taus)} explicit step sizes for {len(cfg.grid_ns)} grids"
        )
    taus = []
    for i, n in enumerate(cfg.grid_ns):
        if cfg.taus is None:
            if n % scheme.q != 0:
                raise ValueError(
                    f"N = {n} not divisible by q = {scheme.q}; tau = q*h needs "
                    "integer step counts"
                )
            taus.append(scheme.q / n)
        else:
            taus.append(float(cfg.taus[i]))

    bare: list[tuple[int, float, float, float]] = []
    for n, tau in zip(cfg.grid_ns, taus):
        problem = build_problem(cfg.dim, n, cfg.beta, cfg.epsilon)
        record = integrate(problem, scheme, tab, tau, cfg.t_end)
        err = problem.exact(cfg.t_end) - record.y
        eps2 = weighted_norm(err, problem.op.grid)
        bare.append((n, tau, eps2, -math.log10(eps2)))

    rows: list[ConvergenceRow] = []
    for i, (n, tau, eps2, delta2) in enumerate(bare):
        p = None
        if i + 1 < len(bare):
            n2, tau2, _, d2next = bare[i + 1]
            halved = n2 == 2 * n and abs(tau2 - 0.5 * tau) <= 1e-12 * tau
            if halved:
                p = (d2next - delta2) / math.log10(2.0)
        rows.append(
            ConvergenceRow(
                n_cells=n, h=1.0 / n, tau=tau, eps2=eps2, delta2=delta2, p=p
            )
        )
    return rows


def render_table(rows: Sequence[ConvergenceRow], format: str = "csv") -> str:
    """Render rows as 'csv' (h,tau,eps2,delta2,p at 6 significant digits)
    or 'markdown' (reference-table style: h as a unit fraction, delta2 to 2
    decimals with the order estimate in parentheses)."""
    if format == "csv":
        lines = ["h,tau,eps2,delta2,p"]
        for r in rows:
            p = f"{r.p:.6g}" if r.p is not None else ""
            lines.append(
                f"{r.h:.6g},{r.tau:.6g},{r.eps2:.6g},{r.delta2:.6g},{p}"
            )
        return "\n".join(lines) + "\n"
    if format in ("markdown", "md"):
        lines = ["| h | delta2 (p) |", "| --- | --- |"]
        for r in rows:
            p = f" ({r.p:.2f})" if r.p is not None else ""
            lines.append(f"| 1/{r.n_cells} | {r.delta2:.2f}{p} |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown table format {format!r}")
