"""Expected performance-loss bound for privatized constraints.

The bound multiplies four quantities: the objective's Lipschitz constant
(the norm of c for a linear objective), the largest feasible norm under the
original constraints, the Hoffman constant of the original matrix (how far
a point can sit from a polyhedron relative to its constraint violation),
and a closed-form bound ``xi`` on the expected Frobenius-norm perturbation
the mechanism introduces.

The Hoffman constant is computed exactly at desk scale by enumerating row
subsets: a subset J is admissible when no nonzero nonnegative combination
of its rows vanishes, and its contribution is the reciprocal of

    min { ||A_J^T v||_2 : v >= 0, ||v||_2 = 1 }.

That inner minimum is found by face enumeration: on the support where a
local minimizer is strictly positive it is an unconstrained critical point
of the Rayleigh quotient, hence a bottom eigenvector of the corresponding
principal submatrix of A_J A_J^T.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mechanism import support_width
from .problem import ConstraintSystem, LinearProgram, PrivacyParams
from . import simplex

HOFFMAN_ROW_CAP = 14
ADMISSION_TOL = 1e-9

XI_INTERIOR = "interior"
XI_CLIPPED = "clipped"


class HoffmanSizeError(ValueError):
    """Row count exceeds the exact-enumeration cap."""


class DegenerateSystemError(ValueError):
    """No row subset is admissible; the Hoffman constant is undefined."""


def _eigenspace_touches_orthant(vectors: np.ndarray) -> bool:
    """Does span(columns) contain a nonzero nonnegative vector?

    Single column: check signability directly. Multiple columns (a repeated
    bottom eigenvalue): decide by a small LP, maximize t s.t. Vw >= t,
    sum(Vw) = 1, which is feasible with t >= 0 exactly when the eigenspace
    meets the nonnegative orthant off the origin.
    """
    r, d = vectors.shape
    if d == 1:
        v = vectors[:, 0]
        return bool((v >= -1e-12).all() or (v <= 1e-12).all())
    # variables: w+ (d), w- (d), t+ , t-
    ones_v = vectors.sum(axis=0)
    rows = np.vstack([
        np.hstack([-vectors, vectors, np.ones((r, 1)), -np.ones((r, 1))]),
        np.hstack([ones_v, -ones_v, 0.0, 0.0]),
        np.hstack([-ones_v, ones_v, 0.0, 0.0]),
    ])
    rhs = np.concatenate([np.zeros(r), [1.0, -1.0]])
    cost = np.zeros(2 * d + 2)
    cost[-2], cost[-1] = 1.0, -1.0
    sol = simplex._solve_raw(cost, rows, rhs)
    return sol.is_optimal and sol.objective >= -1e-9


def _support_candidate(gram: np.ndarray) -> float:
    """Min of sqrt(v' G v) over unit v >= 0 supported (strictly) on all rows.

    Returns the bottom-eigenvalue square root when the bottom eigenspace
    contains a nonnegative vector, else +inf (no interior critical point on
    this support; smaller supports cover the boundary). Bottom eigenvalues
    under the numerical-rank threshold collapse to exactly zero: their
    square root would otherwise surface eigensolver round-off (~1e-8) above
    the admission tolerance and fabricate huge Hoffman constants for
    genuinely degenerate subsets.
    """
    if gram.shape == (1, 1):
        return math.sqrt(max(gram[0, 0], 0.0))
    eigvals, eigvecs = np.linalg.eigh(gram)
    lo = eigvals[0]
    scale = max(1.0, abs(eigvals[-1]))
    group = eigvals <= lo + 1e-10 * scale
    if not _eigenspace_touches_orthant(eigvecs[:, group]):
        return math.inf
    if lo <= 1e-13 * scale:
        return 0.0
    return math.sqrt(lo)


def inner_cone_min(M) -> float:
    """Exact min of ||M^T v||_2 over nonnegative unit vectors v.

    Face enumeration over all nonempty supports of v; every candidate value
    is attained by a feasible v, and the true minimizer appears as the
    bottom eigenpair of its own support's Gram submatrix, so the minimum
    over candidates is exact.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    r = M.shape[0]
    if M.size == 0:
        raise ValueError("M must be non-empty")
    if r > 20:
        raise ValueError(f"face enumeration over {r} rows is too large")
    gram = M @ M.T
    best = math.inf
    for mask in range(1, 1 << r):
        idx = [i for i in range(r) if mask >> i & 1]
        best = min(best, _support_candidate(gram[np.ix_(idx, idx)]))
    return best


def _subset_minima(A: np.ndarray) -> np.ndarray:
    """f[mask] = inner_cone_min over the rows selected by mask, all masks.

    Each support's candidate is computed once and shared across the subsets
    containing it via a subset-minimum transform, which is what makes the
    full 2^m enumeration affordable.
    """
    m = A.shape[0]
    gram = A @ A.T
    f = np.full(1 << m, np.inf)
    for mask in range(1, 1 << m):
        idx = [i for i in range(m) if mask >> i & 1]
        f[mask] = _support_candidate(gram[np.ix_(idx, idx)])
    for bit in range(m):
        step = 1 << bit
        for mask in range(1 << m):
            if mask & step:
                other = f[mask ^ step]
                if other < f[mask]:
                    f[mask] = other
    return f


def hoffman_constant(A) -> float:
    """Hoffman constant of A for the (2,2)-norm pair, by exact enumeration.

    Maximizes 1 / inner_cone_min(A_J) over all nonempty row subsets J whose
    inner minimum exceeds the admission tolerance (exactly the subsets for
    which x -> A_J x + nonneg orthant is surjective). Raises
    :class:`HoffmanSizeError` beyond the row cap and
    :class:`DegenerateSystemError` when no subset is admissible.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m = A.shape[0]
    if m > HOFFMAN_ROW_CAP:
        raise HoffmanSizeError(
            f"exact Hoffman enumeration supports at most {HOFFMAN_ROW_CAP} rows, got {m}")
    f = _subset_minima(A)[1:]
    admitted = f > ADMISSION_TOL
    if not admitted.any():
        raise DegenerateSystemError("no admissible row subset; Hoffman constant undefined")
    return float(1.0 / f[admitted].min())


@dataclass(frozen=True)
class AccuracyReport:
    """Pieces of the expected performance-loss bound and their product."""

    L: float
    x_bar_norm: float
    hoffman: float
    xi: float
    xi_case: str
    bound: float

    def to_dict(self) -> dict:
        return {"L": self.L, "x_bar_norm": self.x_bar_norm, "hoffman": self.hoffman,
                "xi": self.xi, "xi_case": self.xi_case, "bound": self.bound}


def xi_term(sys: ConstraintSystem, p: PrivacyParams) -> tuple[float, str]:
    """Expected-perturbation bound xi and which case produced it.

    Interior case (no entry can reach its public bound even after the full
    shift, a + 2 s_i < sup for every non-masked entry):

        xi = sqrt( sum_rows 2 m (k/eps)^2 n0 + (n0 * s_row)^2 )

    Clipped case (some entry can hit its bound): xi is the Frobenius norm
    of (A - sup_A), the worst tightening the clipping allows.
    """
    m = sys.shape[0]
    counts = sys.row_nonzero_counts()
    clipped = False
    for i in range(m):
        if counts[i] == 0:
            continue
        s_i = support_width(p.k, p.epsilon, p.delta, int(counts[i]))
        free = ~sys.zero_mask[i]
        if np.any(sys.A[i, free] + 2.0 * s_i >= sys.sup_A[i, free]):
            clipped = True
            break
    if clipped:
        return float(np.linalg.norm(sys.A - sys.sup_A)), XI_CLIPPED
    total = 0.0
    ratio = p.k / p.epsilon
    for i in range(m):
        n0 = int(counts[i])
        if n0 == 0:
            continue
        s_i = support_width(p.k, p.epsilon, p.delta, n0)
        total += 2.0 * m * ratio * ratio * n0 + (n0 * s_i) ** 2
    return math.sqrt(total), XI_INTERIOR


def cost_bound(lp: LinearProgram, p: PrivacyParams) -> AccuracyReport:
    """Assemble the expected cost-loss bound L * ||x_bar|| * H * xi.

    Uses the original (non-private) matrix for both the Hoffman constant
    and the max-norm point. An unbounded feasible region yields an infinite
    bound unless the objective is constant or the mechanism cannot perturb
    anything (xi = 0), in which case the loss is exactly zero.
    """
    L = lp.lipschitz
    hoffman = hoffman_constant(lp.system.A)
    xi, xi_case = xi_term(lp.system, p)
    located = simplex.max_norm_point(lp.system)
    x_bar_norm = math.inf if located == simplex.UNBOUNDED else located[1]
    if L == 0.0 or xi == 0.0:
        bound = 0.0
    elif math.isinf(x_bar_norm):
        bound = math.inf
    else:
        bound = L * x_bar_norm * hoffman * xi
    return AccuracyReport(L=L, x_bar_norm=x_bar_norm, hoffman=hoffman,
                          xi=xi, xi_case=xi_case, bound=bound)
