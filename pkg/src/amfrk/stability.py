"""Linear stability of the sweep iteration under directional factorization.

For the scalar test equation split across d directions, y' = (z_1 + ... +
z_d) y / tau, one step of the q-sweep method multiplies y by a rational
function R_q(z, w) of two complex arguments:

    z = z_1 + ... + z_d                  (the full eigenvalue times tau)
    w = (1 - prod_k (1 - gamma*z_k)) / gamma   (what the factored solve sees)

R_q is evaluated by running the sweep recurrence on the 2-vector G:

    G^0 = e,   G^nu = inv(I - w*T_nu) (e + (z*A - w*T_nu) G^(nu-1)),
    R_q = varpi + s_hat . G^q,

where T_nu is the sweep's approx_a matrix.  Unrolled, this is the ordered
product form  R_q = varpi + s_hat (Q_q + sum_j M_q...M_j Q_{j-1}) e  with
Q_nu = inv(I - w*T_nu) and M_nu = Q_nu (z*A - w*T_nu); the recurrence keeps
the product order M_q M_{q-1} ... M_j without forming it.

A-stability in a wedge of half-angle theta means |R_q| <= 1 whenever every
-z_k lies within theta of the positive real axis.  The wedge scan samples
the boundary rays (where the maximum modulus principle puts any violation)
over a cross product of radii per direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .tableau import AmfScheme, ButcherTableau


@dataclass(frozen=True)
class ComplexPoint:
    """One scan sample: per-direction arguments and their combined pair."""

    parts: tuple
    z: complex
    w: complex


def combine_zw(zs, gamma: float) -> tuple[complex, complex]:
    """Combine per-direction eigenvalue arguments into the (z, w) pair.

    With a single direction w = z exactly (no factorization error).
    """
    zs = [complex(v) for v in np.atleast_1d(zs)]
    if len(zs) == 0:
        raise ValueError("need at least one direction argument")
    z = sum(zs)
    prod = 1.0 + 0.0j
    for v in zs:
        prod *= 1.0 - gamma * v
    return z, (1.0 - prod) / gamma


def _combine_w_arrays(parts: list[np.ndarray], gamma: float) -> np.ndarray:
    prod = np.ones_like(parts[0])
    for p in parts:
        prod = prod * (1.0 - gamma * p)
    return (1.0 - prod) / gamma


def stability_function(scheme: AmfScheme, tab: ButcherTableau, z, w):
    """Step multiplier R_q(z, w); accepts scalars or broadcasting arrays.

    R_q has a pole where the sweep's 2x2 solve degenerates (1 - gamma*w = 0);
    samples at or beyond floating range never raise, they come back huge or
    non-finite, and scans drop the non-finite ones.
    """
    z_arr = np.asarray(z, dtype=complex)
    w_arr = np.asarray(w, dtype=complex)
    shape = np.broadcast_shapes(z_arr.shape, w_arr.shape)
    z_arr = np.broadcast_to(z_arr, shape)
    w_arr = np.broadcast_to(w_arr, shape)
    a = tab.a
    g0 = np.ones(shape, dtype=complex)
    g1 = np.ones(shape, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        for it in scheme.iterations:
            t = it.approx_a
            # 2x2 coefficient arrays of z*A - w*T
            c00 = z_arr * a[0, 0] - w_arr * t[0, 0]
            c01 = z_arr * a[0, 1] - w_arr * t[0, 1]
            c10 = z_arr * a[1, 0] - w_arr * t[1, 0]
            c11 = z_arr * a[1, 1] - w_arr * t[1, 1]
            v0 = 1.0 + c00 * g0 + c01 * g1
            v1 = 1.0 + c10 * g0 + c11 * g1
            # closed-form inverse of I - w*T
            m00 = 1.0 - w_arr * t[0, 0]
            m01 = -w_arr * t[0, 1]
            m10 = -w_arr * t[1, 0]
            m11 = 1.0 - w_arr * t[1, 1]
            det = m00 * m11 - m01 * m10
            g0 = (m11 * v0 - m01 * v1) / det
            g1 = (m00 * v1 - m10 * v0) / det
    out = tab.varpi + tab.s_hat[0] * g0 + tab.s_hat[1] * g1
    if out.shape == ():
        return complex(out)
    return out


@dataclass(frozen=True)
class ScanResult:
    """Outcome of a wedge scan.

    max_modulus : largest finite |R_q| over the sample set
    argmax : sample attaining it
    per_ray : max |R_q| per combination of boundary rays, keyed by the tuple
        of ray angles (each is arg(-z_k))
    n_samples / n_excluded : evaluated vs skipped (singular-solve) counts
    samples : optional retained rows (ComplexPoint, |R|) for export
    """

    max_modulus: float
    argmax: ComplexPoint
    per_ray: dict
    n_samples: int
    n_excluded: int
    samples: Optional[list] = None

    def csv_rows(self):
        """Yield CSV lines 'z1_re,z1_im,...,abs_R' for retained samples."""
        if self.samples is None:
            raise ValueError("scan was run without keep_samples")
        d = len(self.argmax.parts)
        header = ",".join(
            f"z{k+1}_re,z{k+1}_im" for k in range(d)
        ) + ",abs_r"
        yield header
        for pt, mod in self.samples:
            parts = ",".join(f"{v.real:.9g},{v.imag:.9g}" for v in pt.parts)
            yield f"{parts},{mod:.9g}"


def _default_radii() -> np.ndarray:
    return np.logspace(-3.0, 6.0, 40)


def wedge_stability_scan(
    scheme: AmfScheme,
    tab: ButcherTableau,
    d: int,
    theta: float,
    radii=None,
    angles=None,
    cap: int = 4_000_000,
    n_random: int = 1_000_000,
    seed: int = 0,
    keep_samples: bool = False,
) -> ScanResult:
    """Scan |R_q| with every -z_k inside the wedge of half-angle theta.

    Each direction samples the wedge boundary: the rays arg(-z_k) = +-theta
    plus the negative real axis (just the real axis when theta = 0), with
    optional extra interior rays via ``angles`` (offsets in [0, theta], added
    with both signs).  Radii default to 40 points log-spaced on [1e-3, 1e6].

    The full (ray, radius) cross product across the d directions is scanned
    when its size fits ``cap``; otherwise a deterministic subsample is used
    (all ray combinations crossed with equal-radius-index tuples, plus
    ``n_random`` seeded random tuples).
    """
    if d < 1:
        raise ValueError(f"need at least one direction, got {d}")
    if theta < 0.0 or theta > np.pi / 2:
        raise ValueError(f"wedge half-angle must lie in [0, pi/2], got {theta}")
    radii = _default_radii() if radii is None else np.asarray(radii, dtype=float)
    if radii.ndim != 1 or radii.size == 0 or np.any(radii <= 0.0):
        raise ValueError("radii must be a nonempty 1-D array of positive values")
    rays = [0.0] if theta == 0.0 else [theta, -theta, 0.0]
    if angles is not None:
        for ang in angles:
            ang = float(ang)
            if ang < 0.0 or ang > theta:
                raise ValueError(f"interior ray angle {ang} outside [0, {theta}]")
            if ang != 0.0 and ang != theta:
                rays.extend([ang, -ang])
    rays_arr = np.asarray(rays)
    n_rays, n_radii = rays_arr.size, radii.size
    per_var = n_rays * n_radii
    # per-direction sample values: index = ray*n_radii + radius
    values = (-np.exp(1j * rays_arr)[:, None] * radii[None, :]).reshape(-1)

    total = per_var**d
    gamma = scheme.gamma

    best = {"mod": -np.inf, "parts": None}
    per_ray: dict = {}
    counts = {"n": 0, "excluded": 0}
    kept: Optional[list] = [] if keep_samples else None

    def eval_chunk(idx_parts: list[np.ndarray]):
        parts = [values[ix] for ix in idx_parts]
        z = parts[0].copy()
        for p in parts[1:]:
            z += p
        w = _combine_w_arrays(parts, gamma) if d > 1 else z
        r = stability_function(scheme, tab, z, w)
        mod = np.abs(r)
        finite = np.isfinite(mod)
        counts["n"] += mod.size
        counts["excluded"] += int(mod.size - finite.sum())
        mod_f = np.where(finite, mod, -np.inf)
        # per-ray-combination maxima
        combo = idx_parts[0] // n_radii
        for ix in idx_parts[1:]:
            combo = combo * n_rays + ix // n_radii
        order = np.argsort(combo, kind="stable")
        sc, sm = combo[order], mod_f[order]
        bounds = np.flatnonzero(np.diff(sc)) + 1
        for cid, seg in zip(
            sc[np.concatenate(([0], bounds))] if sc.size else [],
            np.split(sm, bounds),
        ):
            key = tuple(
                float(rays_arr[(int(cid) // n_rays**k) % n_rays])
                for k in reversed(range(d))
            )
            m = float(seg.max())
            if m > per_ray.get(key, -np.inf):
                per_ray[key] = m
        k = int(np.argmax(mod_f))
        if mod_f[k] > best["mod"]:
            best["mod"] = float(mod_f[k])
            best["parts"] = tuple(complex(p[k]) for p in parts)
        if kept is not None:
            for i in range(mod.size):
                pt = tuple(complex(p[i]) for p in parts)
                zz, ww = combine_zw(pt, gamma)
                kept.append((ComplexPoint(parts=pt, z=zz, w=ww), float(mod[i])))

    chunk = 1 << 18
    if total <= cap:
        for start in range(0, total, chunk):
            flat = np.arange(start, min(start + chunk, total))
            idx_parts = [(flat // per_var**k) % per_var for k in range(d)]
            eval_chunk(idx_parts)
    else:
        # diagonal radius tuples across every ray combination
        ray_grid = np.arange(n_rays**d)
        ray_digits = [(ray_grid // n_rays**k) % n_rays for k in range(d)]
        for ri in range(n_radii):
            idx_parts = [dig * n_radii + ri for dig in ray_digits]
            eval_chunk(idx_parts)
        rng = np.random.default_rng(seed)
        remaining = n_random
        while remaining > 0:
            take = min(chunk, remaining)
            idx = rng.integers(0, per_var, size=(d, take))
            eval_chunk(list(idx))
            remaining -= take

    if best["parts"] is None:
        raise RuntimeError("every scan sample was excluded as singular")
    zz, ww = combine_zw(best["parts"], gamma)
    return ScanResult(
        max_modulus=best["mod"],
        argmax=ComplexPoint(parts=best["parts"], z=zz, w=ww),
        per_ray=per_ray,
        n_samples=counts["n"],
        n_excluded=counts["excluded"],
        samples=kept,
    )


def splitting_sup_bound(d: int, gamma: float) -> float:
    """Closed-form sup of |z / (1 - gamma*w)| over the left half-plane.

    For a d-direction splitting with all Re z_k <= 0 the ratio is bounded by
    (1/gamma) * sqrt((d-1)^(d-1) / d^(d-2)), attained on the imaginary axis
    with all directions equal; d = 1 gives 1/gamma (approached, not attained).
    """
    if d < 1:
        raise ValueError(f"need at least one direction, got {d}")
    if gamma <= 0.0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if d == 1:
        return 1.0 / gamma
    return float((1.0 / gamma) * np.sqrt((d - 1) ** (d - 1) / d ** (d - 2)))


def sampled_sup_ratio(
    d: int,
    gamma: float,
    n_diag: int = 4001,
    n_random: int = 20000,
    seed: int = 0,
) -> float:
    """Sampled sup of |z / (1 - gamma*w)| over imaginary-axis arguments.

    Samples the diagonal z_k = i*x around the known maximizer
    x = 1/(gamma*sqrt(d-1)) plus seeded random imaginary tuples; approaches
    splitting_sup_bound(d, gamma) from below.  Requires d >= 2 (for d = 1
    the sup is only approached as |z| grows without bound).
    """
    if d < 2:
        raise ValueError("sampled sup needs d >= 2")
    x_star = 1.0 / (gamma * (d - 1) ** 0.5)
    xs = np.linspace(0.5 * x_star, 2.0 * x_star, n_diag)
    zs = 1j * xs
    denom = (1.0 - gamma * zs) ** d
    vals = np.abs(d * zs / denom)
    out = float(vals.max())
    rng = np.random.default_rng(seed)
    xr = rng.uniform(-3.0 * x_star, 3.0 * x_star, size=(n_random, d))
    zr = 1j * xr
    prod = np.prod(1.0 - gamma * zr, axis=1)
    vals_r = np.abs(zr.sum(axis=1) / prod)
    return max(out, float(vals_r.max()))
