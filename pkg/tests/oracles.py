"""Independent oracles the tests check the package against.

Everything here recomputes expected values by a different route than the
implementation under test: high-precision arithmetic for closed forms,
quadrature for distribution facts, brute-force enumeration and sampling
for polyhedral quantities. Nothing imports the package's computational
paths except where a test explicitly compares the two.
"""
from __future__ import annotations

import itertools
import math

import mpmath as mp
import numpy as np
from scipy import integrate
from scipy.optimize import minimize


def support_width_hp(k, eps, delta, n0) -> float:
    """Support half-width evaluated at 50 decimal digits."""
    with mp.workdps(50):
        value = (mp.mpf(k) / mp.mpf(eps)) * mp.log(
            n0 * (mp.e ** mp.mpf(eps) - 1) / mp.mpf(delta) + 1)
        return float(value)


def _quad_kinked(f, lo, hi):
    # split at the |z| kink so quad reaches full precision
    if lo < 0.0 < hi:
        a, _ = integrate.quad(f, lo, 0.0, limit=200)
        b, _ = integrate.quad(f, 0.0, hi, limit=200)
        return a + b
    value, _ = integrate.quad(f, lo, hi, limit=200)
    return value


def trunc_laplace_moment(sigma: float, s: float, power: int = 2) -> float:
    """Moment of the truncated Laplace density by numerical quadrature."""
    dens = lambda z: math.exp(-abs(z) / sigma)
    mass = _quad_kinked(dens, -s, s)
    raw = _quad_kinked(lambda z: z ** power * dens(z), -s, s)
    return raw / mass


def trunc_laplace_cdf(x: float, sigma: float, s: float) -> float:
    """P(z <= x) for the truncated Laplace density, by quadrature."""
    if x <= -s:
        return 0.0
    dens = lambda z: math.exp(-abs(z) / sigma)
    mass = _quad_kinked(dens, -s, s)
    head = _quad_kinked(dens, -s, min(x, s))
    return head / mass


# ---------------------------------------------------------------------------
# polyhedron oracles


def region_vertices(A, b, tol=1e-9) -> np.ndarray:
    """Vertices of {x >= 0 : A x <= b} by rank-checked basis enumeration."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    rows = np.vstack([A, -np.eye(n)])
    rhs = np.concatenate([b, np.zeros(n)])
    vertices = []
    seen = set()
    for comb in itertools.combinations(range(m + n), n):
        square = rows[list(comb)]
        if np.linalg.matrix_rank(square) < n:
            continue
        x, *_ = np.linalg.lstsq(square, rhs[list(comb)], rcond=None)
        if np.linalg.norm(square @ x - rhs[list(comb)]) > 1e-8:
            continue
        if np.max(rows @ x - rhs) > tol:
            continue
        key = tuple(np.round(x, 9))
        if key not in seen:
            seen.add(key)
            vertices.append(x)
    return np.array(vertices) if vertices else np.empty((0, n))


def lp_oracle(c, A, b):
    """Brute-force LP verdict: ('Infeasible' | 'Unbounded' | 'Optimal', objective).

    Feasibility and the optimum come from vertex enumeration (the region
    lies in the nonnegative orthant, so it is pointed and any finite
    optimum sits on a vertex). Unboundedness is certified by a recession
    direction with positive objective, found on the capped recession cone.
    """
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    vertices = region_vertices(A, b)
    if vertices.shape[0] == 0:
        return "Infeasible", None
    n = A.shape[1]
    cone_A = np.vstack([A, np.ones((1, n))])
    cone_b = np.concatenate([np.zeros(A.shape[0]), [1.0]])
    for d in region_vertices(cone_A, cone_b):
        if d.sum() > 1e-6 and c @ (d / d.sum()) > 1e-9:
            return "Unbounded", None
    return "Optimal", float((vertices @ c).max())


def max_norm_grid(A, b, box_hi, step=1e-3):
    """Largest norm over {x >= 0 : A x <= b} by dense grid search.

    Grids the first n-1 coordinates at ``step`` and closes the last
    coordinate in closed form (its feasible interval given the others is
    explicit), so the search error comes from n-1 gridded dimensions only.
    Supports n in {2, 3}.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    assert n in (2, 3)
    axes = [np.arange(0.0, hi + step, step) for hi in box_hi[:-1]]
    grid = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grid], axis=1)
    best = 0.0
    chunk = 2_000_000
    for lo in range(0, pts.shape[0], chunk):
        P = pts[lo:lo + chunk]
        partial = P @ A[:, :-1].T
        hi_bound = np.full(P.shape[0], box_hi[-1])
        lo_bound = np.zeros(P.shape[0])
        last = A[:, -1]
        for i in range(m):
            slack = b[i] - partial[:, i]
            if last[i] > 1e-12:
                hi_bound = np.minimum(hi_bound, slack / last[i])
            elif last[i] < -1e-12:
                lo_bound = np.maximum(lo_bound, slack / last[i])
            else:
                hi_bound = np.where(slack < 0, -1.0, hi_bound)  # infeasible point
        ok = hi_bound >= lo_bound - 1e-12
        if not ok.any():
            continue
        norms_sq = (P[ok] ** 2).sum(axis=1) + np.maximum(hi_bound[ok], lo_bound[ok]) ** 2
        best = max(best, float(np.sqrt(norms_sq.max())))
    return best


# ---------------------------------------------------------------------------
# Hoffman-constant oracles


def _refine_nonneg_min(M: np.ndarray, v0: np.ndarray) -> float:
    """Polish a candidate minimizer of ||M^T v|| over the nonnegative sphere.

    Parameterizes v = w*w / ||w*w|| so iterates stay in the orthant, and
    minimizes the squared norm (smooth at a zero minimum).
    """
    gram = M @ M.T

    def objective(w):
        v = w * w
        scale = np.linalg.norm(v)
        if scale == 0.0:
            return float("inf")
        v = v / scale
        return float(v @ gram @ v)

    result = minimize(objective, np.sqrt(np.abs(v0)), method="Nelder-Mead",
                      options={"xatol": 1e-13, "fatol": 1e-18, "maxiter": 20_000,
                               "maxfev": 20_000})
    return math.sqrt(max(min(result.fun, objective(np.sqrt(np.abs(v0)))), 0.0))


def sphere_inner_min(M, n_dirs=1_000_000, seed=0, bank=None, refine=True) -> float:
    """min ||M^T v|| over nonnegative unit v, by dense sampling + polish."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    r = M.shape[0]
    if bank is None:
        bank = np.abs(np.random.default_rng(seed).standard_normal((n_dirs, r)))
    V = bank[:, :r] / np.linalg.norm(bank[:, :r], axis=1, keepdims=True)
    vals = np.linalg.norm(V @ M, axis=1)
    i = int(np.argmin(vals))
    best = float(vals[i])
    if refine:
        best = min(best, _refine_nonneg_min(M, V[i]))
    return best


def hoffman_bruteforce(A, n_dirs=1_000_000, seed=0, admit_tol=1e-6) -> float:
    """Definition-level Hoffman constant: subset enumeration + sampling.

    ``admit_tol`` is the oracle's numerical resolution: sampling plus local
    polish cannot certify an inner minimum below ~1e-8, so subsets whose
    polished minimum lands under the tolerance are treated as degenerate
    (not admissible). Random instances used in tests keep a wide margin on
    both sides of it.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m = A.shape[0]
    bank = np.abs(np.random.default_rng(seed).standard_normal((n_dirs, m)))
    best = None
    for size in range(1, m + 1):
        for subset in itertools.combinations(range(m), size):
            sub_bank = bank[:, : size]
            value = sphere_inner_min(A[list(subset)], bank=sub_bank)
            if value > admit_tol:
                best = value if best is None else min(best, value)
    if best is None:
        raise ValueError("no admissible subset")
    return 1.0 / best
