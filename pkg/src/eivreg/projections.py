"""Euclidean projections onto the constraint sets used by the solver.

The l1-ball and l2-ball projections are exact.  The lq-ball (0 < q < 1) is
nonconvex and has no known exact projection; ``project_lq`` returns the
best of three candidate families and is guaranteed to be at least as close
to the input as either documented heuristic (radial rescaling, or hard
thresholding followed by rescaling).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import as_vector
from .errors import DomainError
from .model import SparsityBudget


@dataclass(frozen=True)
class ProjectionOptions:
    feas_tol: float = 1e-9       # feasibility slack on membership checks
    max_cycles: int = 100        # alternating-projection safety cap
    bisect_tol: float = 1e-12    # scalar root finding / cycle stop tolerance

    def __post_init__(self):
        if self.feas_tol <= 0 or self.bisect_tol <= 0:
            raise DomainError("tolerances must be > 0")
        if self.max_cycles < 1:
            raise DomainError("max_cycles must be >= 1")


def project_l1(v, R: float) -> np.ndarray:
    """Exact Euclidean projection onto the l1-ball of radius R.

    Sort-and-scan threshold search: deterministic, O(n log n).
    """
    w = as_vector(v, "v")
    if R <= 0:
        raise DomainError(f"R must be > 0, got {R}")
    a = np.abs(w)
    if a.sum() <= R:
        return w.copy()
    u = np.sort(a)[::-1]
    css = np.cumsum(u)
    ks = np.arange(1, u.shape[0] + 1)
    rho = np.nonzero(u - (css - R) / ks > 0)[0][-1]
    theta = (css[rho] - R) / (rho + 1.0)
    return np.sign(w) * np.maximum(a - theta, 0.0)


def project_l0(v, R0: int) -> np.ndarray:
    """Keep the R0 largest-magnitude entries, zero the rest.

    Ties are broken by keeping the lower index.
    """
    w = as_vector(v, "v")
    if R0 < 1:
        raise DomainError(f"R0 must be >= 1, got {R0}")
    if R0 >= w.shape[0]:
        return w.copy()
    order = np.argsort(-np.abs(w), kind="stable")
    out = np.zeros_like(w)
    keep = order[:R0]
    out[keep] = w[keep]
    return out


def _radial_scale(v: np.ndarray, q: float, Rq: float) -> np.ndarray:
    """Scale v onto the lq budget: sum |t v|^q = t^q sum |v|^q is exactly
    invertible, so no root finding is needed."""
    lqv = float(np.sum(np.abs(v) ** q))
    if lqv <= Rq:
        return v.copy()
    # aim a hair inside the budget so rounding cannot push the result out
    t = (Rq * (1.0 - 1e-12) / lqv) ** (1.0 / q)
    return t * v


def _shrink_roots(a: np.ndarray, q: float, lam: float, tol: float) -> np.ndarray:
    """Vectorized larger root of w + lam*q*w^(q-1) = a for each a > 0.

    Callers guarantee the root exists (lam below every coordinate's
    existence limit); the root lies in [w_bar, a] where w_bar is the
    stationary kink of the left-hand side.
    """
    if lam == 0.0:
        return a.copy()
    wbar = (lam * q * (1.0 - q)) ** (1.0 / (2.0 - q))
    lo = np.full_like(a, wbar)
    hi = a.copy()
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        too_big = mid + lam * q * mid ** (q - 1.0) > a
        hi = np.where(too_big, mid, hi)
        lo = np.where(too_big, lo, mid)
        if float(np.max(hi - lo)) < tol:
            break
    return 0.5 * (lo + hi)


def _support_boundary_candidate(
    v: np.ndarray, keep: np.ndarray, q: float, Rq: float, tol: float
):
    """Stationary point on a fixed support with the budget active.

    Solves the shared-multiplier optimality system: each kept coordinate is
    shrunk non-uniformly to the larger root of w + lam*q*w^(q-1) = |v_i|,
    with lam chosen by bisection so the support's quasi-norm hits the
    budget.  Roots exist only for lam up to a per-coordinate limit with the
    closed form ((a (1-q) / (2-q))^(2-q)) / (q (1-q)); if the budget is
    still exceeded at the joint limit, no such point exists and None is
    returned (a sparser support takes over).
    """
    a = np.abs(v[keep])
    a = a[a > 0.0]
    if a.size == 0:
        return None
    if float(np.sum(a**q)) <= Rq:
        return None  # covered by the plain thresholding candidate
    lam_hi = float(np.min(((a * (1.0 - q) / (2.0 - q)) ** (2.0 - q)) / (q * (1.0 - q))))
    if float(np.sum(_shrink_roots(a, q, lam_hi, tol) ** q)) > Rq:
        return None
    lo, hi = 0.0, lam_hi
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if float(np.sum(_shrink_roots(a, q, mid, tol) ** q)) <= Rq:
            hi = mid
        else:
            lo = mid
        if hi - lo < tol * max(lam_hi, 1.0):
            break
    keep_nz = keep[np.abs(v[keep]) > 0.0]
    out = np.zeros_like(v)
    out[keep_nz] = np.sign(v[keep_nz]) * _shrink_roots(
        np.abs(v[keep_nz]), q, hi, tol
    )
    return out


def project_lq(v, q: float, Rq: float, opts: ProjectionOptions) -> np.ndarray:
    """Approximate Euclidean projection onto {w : sum |w_j|^q <= Rq}.

    Candidates: radial rescaling, hard thresholding to k entries with the
    survivors rescaled (k = 1..min(n, 64)), and shared-multiplier boundary
    stationary points on the supports near the best thresholding k (the
    boundary solve costs a nested bisection per support, so it is limited
    to that window).  The feasible candidate nearest to v wins; the result
    is feasible within ``opts.feas_tol`` but not guaranteed globally
    optimal (the set is nonconvex).
    """
    w = as_vector(v, "v")
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0, 1), got {q}")
    if Rq <= 0:
        raise DomainError(f"Rq must be > 0, got {Rq}")
    if float(np.sum(np.abs(w) ** q)) <= Rq:
        return w.copy()

    k_max = min(w.shape[0], 64)
    order = np.argsort(-np.abs(w), kind="stable")
    candidates = [_radial_scale(w, q, Rq)]
    best_k, best_k_d = 1, np.inf
    for k in range(1, k_max + 1):
        keep = order[:k]
        cand = np.zeros_like(w)
        cand[keep] = w[keep]
        cand = _radial_scale(cand, q, Rq)
        candidates.append(cand)
        d = float(np.linalg.norm(cand - w))
        if d < best_k_d:
            best_k, best_k_d = k, d
    for k in range(max(1, best_k - 4), min(k_max, best_k + 4) + 1):
        boundary = _support_boundary_candidate(
            w, order[:k], q, Rq, opts.bisect_tol
        )
        if boundary is not None:
            candidates.append(boundary)

    best = np.zeros_like(w)  # the origin is always feasible
    best_d = float(np.linalg.norm(w))
    for cand in candidates:
        if float(np.sum(np.abs(cand) ** q)) > Rq + opts.feas_tol:
            continue
        d = float(np.linalg.norm(cand - w))
        if d < best_d:
            best, best_d = cand, d
    return best


def project_constraint_set(
    v, budget: SparsityBudget, opts: ProjectionOptions
) -> np.ndarray:
    """Project onto the budget's quasi-norm ball intersected with the closed
    unit l2-ball by alternating the two projections.

    The l2 clip is a uniform shrink, so it can never increase any |w_j| and
    preserves lq feasibility (and support) exactly; one cycle therefore
    suffices and ``max_cycles`` is a safety net.
    """
    w = as_vector(v, "v").copy()
    q, radius = budget.q, budget.radius
    for _ in range(opts.max_cycles):
        prev = w
        if q == 0.0:
            r0 = int(radius)
            w = project_l0(w, r0) if r0 >= 1 else np.zeros_like(w)
        elif q == 1.0:
            w = project_l1(w, radius)
        else:
            w = project_lq(w, q, radius, opts)
        nrm = float(np.linalg.norm(w))
        if nrm > 1.0:
            w = w / nrm
        if float(np.linalg.norm(w - prev)) < opts.bisect_tol:
            break
    return w
