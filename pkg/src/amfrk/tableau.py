"""Two-stage Radau IIA tableau and the iteration coefficients built on it.

The integrators in this package never solve the implicit Runge-Kutta stage
system exactly.  Each sweep replaces the Butcher matrix A by a rank-structured
approximation ``approx_a`` with a double eigenvalue ``gamma = sqrt(det A)``,
which is what makes a directionally factored linear solve possible.  This
module holds the tableau, the per-sweep coefficient sets, and the algebraic
checks that pin the published coefficient values down.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

SQRT6 = math.sqrt(6.0)

# gamma = sqrt(det A) for the 2-stage Radau IIA matrix (det A = 1/6)
GAMMA = 1.0 / SQRT6


@dataclass(frozen=True)
class ButcherTableau:
    """Coefficients of an s-stage Runge-Kutta method.

    a : (s, s) stage matrix
    b : (s,) quadrature weights
    c : (s,) abscissae
    s_hat : (s,) output weights b^T A^{-1}, used by the one-leg form of the
        corrector ``y_{n+1} = varpi*y_n + s_hat . Y``
    varpi : 1 - sum(s_hat); zero for stiffly accurate methods
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    s_hat: np.ndarray
    varpi: float

    @property
    def stages(self) -> int:
        return self.b.shape[0]


def _solve2_fraction(m, rhs):
    """Solve a 2x2 system in exact rational arithmetic."""
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    x0 = (rhs[0] * m[1][1] - rhs[1] * m[0][1]) / det
    x1 = (rhs[1] * m[0][0] - rhs[0] * m[1][0]) / det
    return x0, x1


def radau2a_tableau() -> ButcherTableau:
    """Two-stage Radau IIA method (stage order 2, classical order 3, L-stable).

    Entries are assembled in exact rational arithmetic before conversion to
    float64, so derived quantities like s_hat = (0, 1) and varpi = 0 carry no
    rounding at all.
    """
    F = Fraction
    a = [[F(5, 12), F(-1, 12)], [F(3, 4), F(1, 4)]]
    b = [F(3, 4), F(1, 4)]
    c = [F(1, 3), F(1)]
    # s_hat solves A^T s_hat = b
    at = [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
    s0, s1 = _solve2_fraction(at, b)
    varpi = F(1) - s0 - s1
    return ButcherTableau(
        a=np.array(a, dtype=float),
        b=np.array(b, dtype=float),
        c=np.array(c, dtype=float),
        s_hat=np.array([s0, s1], dtype=float),
        varpi=float(varpi),
    )


@dataclass(frozen=True)
class AmfIteration:
    """Coefficients of one inexact-Newton sweep.

    The sweep uses the similarity structure

        approx_a = gamma * mix @ inv(I - low) @ inv(mix)

    with ``mix = [[1, mix_coeff], [0, 1]]`` and ``low`` strictly lower
    triangular with entry ``low_coeff``.  By construction approx_a has the
    double eigenvalue gamma, so the stage solve factors into d tridiagonal
    solves with the single shift gamma*tau per direction.
    """

    mix_coeff: float
    low_coeff: float
    mix: np.ndarray
    low: np.ndarray
    approx_a: np.ndarray


def _make_iteration(mix_coeff: float, low_coeff: float, gamma: float) -> AmfIteration:
    s, l = mix_coeff, low_coeff
    mix = np.array([[1.0, s], [0.0, 1.0]])
    low = np.array([[0.0, 0.0], [l, 0.0]])
    # closed form of gamma * mix @ inv(I - low) @ inv(mix); trace 2*gamma,
    # determinant gamma**2, hence the double eigenvalue gamma
    approx_a = gamma * np.array([[1.0 + s * l, -l * s * s], [l, 1.0 - s * l]])
    return AmfIteration(mix_coeff=s, low_coeff=l, mix=mix, low=low, approx_a=approx_a)


@dataclass(frozen=True)
class AmfScheme:
    """A fixed number q of sweeps with their per-sweep coefficients."""

    name: str
    q: int
    gamma: float
    iterations: tuple[AmfIteration, ...]


# published coefficient pairs (mix_coeff, low_coeff), closed forms in sqrt(6)
_PAIR_A = (-(3.0 + 2.0 * SQRT6) / 9.0, 0.75 * (5.0 * SQRT6 - 12.0))
_PAIR_B = ((5.0 - 2.0 * SQRT6) / 9.0, 0.75 * SQRT6)


def amf_scheme(q: int) -> AmfScheme:
    """Return the q-sweep scheme, q in {1, 2, 3}.

    q=1: one sweep, coefficients chosen so the stage-consistency condition
         (a - approx_a) @ c = 0 holds; order two.
    q=2: first sweep as q=1, second sweep annihilates the output row,
         e2^T inv(approx_a) (a - approx_a) = 0; order three.
    q=3: three identical sweeps, each with the output-row condition; order
         three with a wider usable step range.
    """
    if not isinstance(q, int) or isinstance(q, bool):
        raise ValueError(f"sweep count must be an int, got {q!r}")
    if q == 1:
        pairs = [_PAIR_A]
    elif q == 2:
        pairs = [_PAIR_A, _PAIR_B]
    elif q == 3:
        pairs = [_PAIR_B, _PAIR_B, _PAIR_B]
    else:
        raise ValueError(f"sweep count must be 1, 2 or 3, got {q}")
    iters = tuple(_make_iteration(s, l, GAMMA) for s, l in pairs)
    return AmfScheme(name=f"amf{q}", q=q, gamma=GAMMA, iterations=iters)


def extended_scheme(scheme: AmfScheme, q: int) -> AmfScheme:
    """Extend a scheme to q sweeps by repeating its last sweep.

    Test facility: as q grows the sweeps converge to the exact stage solution,
    so the extended scheme lets tests compare against a dense implicit solve.
    """
    if q < scheme.q:
        raise ValueError(f"cannot shrink a {scheme.q}-sweep scheme to q={q}")
    iters = scheme.iterations + (scheme.iterations[-1],) * (q - scheme.q)
    return AmfScheme(name=f"{scheme.name}x{q}", q=q, gamma=scheme.gamma, iterations=iters)


def verify_scheme_conditions(scheme: AmfScheme, tab: ButcherTableau) -> dict[str, float]:
    """Residuals of the algebraic conditions defining each scheme.

    Returns a dict of named max-abs residuals, all of which should sit at
    rounding level (< 1e-14) for the published coefficients:

    reconstruction[i]      approx_a_i versus gamma * mix (I-low)^-1 mix^-1
    eigenvalue_pair[i]     (trace - 2*gamma, det - gamma^2) of approx_a_i
    stage_consistency[i]   (a - approx_a_i) @ c, for sweeps designed with it
    output_row[i]          e2^T inv(approx_a_i) (a - approx_a_i), likewise
    """
    a, c = tab.a, tab.c
    g = scheme.gamma
    out: dict[str, float] = {}
    # which sweeps carry which design condition
    if scheme.q == 1:
        stage_idx, row_idx = {0}, set()
    elif scheme.q == 2:
        stage_idx, row_idx = {0}, {1}
    else:
        stage_idx, row_idx = set(), set(range(scheme.q))
    eye = np.eye(2)
    for i, it in enumerate(scheme.iterations):
        rebuilt = g * it.mix @ np.linalg.inv(eye - it.low) @ np.linalg.inv(it.mix)
        out[f"reconstruction[{i}]"] = float(np.max(np.abs(it.approx_a - rebuilt)))
        tr = it.approx_a[0, 0] + it.approx_a[1, 1]
        det = np.linalg.det(it.approx_a)
        out[f"eigenvalue_pair[{i}]"] = max(abs(tr - 2.0 * g), abs(det - g * g))
        if i in stage_idx:
            out[f"stage_consistency[{i}]"] = float(np.max(np.abs((a - it.approx_a) @ c)))
        if i in row_idx:
            row = np.linalg.solve(it.approx_a.T, np.array([0.0, 1.0]))
            out[f"output_row[{i}]"] = float(np.max(np.abs(row @ (a - it.approx_a))))
    return out
