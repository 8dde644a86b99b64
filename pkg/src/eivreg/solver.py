"""Projected gradient descent for the constrained quadratic program.

The objective 0.5 * b' gamma b - upsilon' b may be indefinite (gamma is a
corrected Gram matrix), and the feasible set is nonconvex for q < 1, so the
solver runs several restarts and returns the best stationary point found.
It does not claim global optimality in the nonconvex cases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import as_square_symmetric, as_vector
from .errors import DimensionError, DomainError, NumericError
from .model import SparsityBudget
from .projections import ProjectionOptions, project_constraint_set
from .surrogate import SurrogatePair

_ARMIJO = 1e-4
_MAX_BACKTRACKS = 60
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class SolverOptions:
    max_iters: int = 10000
    step_rule: str = "backtracking"  # or "fixed" (reciprocal Lipschitz)
    conv_tol: float = 1e-8           # l2 threshold on the iterate change
    power_iters: int = 100           # spectral-norm power iterations
    restarts: int = 4                # extra random feasible restarts
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1:
            raise DomainError("max_iters must be >= 1")
        if self.conv_tol <= 0:
            raise DomainError("conv_tol must be > 0")
        if self.step_rule not in ("fixed", "backtracking"):
            raise DomainError(f"unknown step_rule {self.step_rule!r}")
        if self.power_iters < 1:
            raise DomainError("power_iters must be >= 1")
        if self.restarts < 0:
            raise DomainError("restarts must be >= 0")


@dataclass(frozen=True)
class Solution:
    beta_hat: np.ndarray
    objective: float
    iterations: int
    converged: bool
    restart_index: int


def objective(gamma, upsilon, beta) -> float:
    """0.5 * beta' gamma beta - upsilon' beta."""
    g = as_square_symmetric(gamma, "gamma")
    u = as_vector(upsilon, "upsilon")
    b = as_vector(beta, "beta")
    if u.shape[0] != g.shape[0] or b.shape[0] != g.shape[0]:
        raise DimensionError("gamma, upsilon and beta dimensions disagree")
    return float(0.5 * b @ (g @ b) - u @ b)


def gradient(gamma, upsilon, beta) -> np.ndarray:
    """gamma beta - upsilon."""
    g = as_square_symmetric(gamma, "gamma")
    u = as_vector(upsilon, "upsilon")
    b = as_vector(beta, "beta")
    if u.shape[0] != g.shape[0] or b.shape[0] != g.shape[0]:
        raise DimensionError("gamma, upsilon and beta dimensions disagree")
    return g @ b - u


def spectral_norm(gamma, iters: int = 100, seed: int = 0) -> float:
    """Largest singular value of a symmetric matrix by power iteration on
    its square, from a seeded start vector (deterministic)."""
    g = as_square_symmetric(gamma, "gamma")
    n = g.shape[0]
    rng = np.random.default_rng([seed, 0x9E3779B9])
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    for _ in range(iters):
        w = g @ (g @ v)
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return 0.0
        v = w / nw
    return float(np.sqrt(v @ (g @ (g @ v))))


def _pgd(gamma, upsilon, budget, beta0, eta0, opts, proj_opts, trace=None):
    """One projected-gradient run; returns (beta, objective, iters, converged).

    ``trace``, when a dict, collects the per-iteration objective values and
    iterates (diagnostics only).
    """
    beta = beta0
    # overflow is detected by explicit isfinite checks, not numpy warnings
    with np.errstate(over="ignore", invalid="ignore"):
        gb = gamma @ beta
        f = float(0.5 * beta @ gb - upsilon @ beta)
    if trace is not None:
        trace.setdefault("objectives", []).append(f)
        trace.setdefault("iterates", []).append(beta.copy())
    eta_run = eta0  # last accepted step; halving restarts near it, not at eta0
    for it in range(1, opts.max_iters + 1):
        grad = gb - upsilon
        if not np.all(np.isfinite(grad)):
            raise NumericError(f"non-finite gradient at iteration {it}")
        if opts.step_rule == "fixed":
            cand = project_constraint_set(beta - eta0 * grad, budget, proj_opts)
            gc = gamma @ cand
            fc = float(0.5 * cand @ gc - upsilon @ cand)
        else:
            eta = min(eta0, 2.0 * eta_run)
            accepted = False
            for _ in range(_MAX_BACKTRACKS):
                cand = project_constraint_set(beta - eta * grad, budget, proj_opts)
                gc = gamma @ cand
                fc = float(0.5 * cand @ gc - upsilon @ cand)
                step = cand - beta
                if fc <= f - _ARMIJO * float(step @ step) / eta:
                    accepted = True
                    break
                eta *= 0.5
            if not accepted:
                # No step of any size makes progress: stationary.
                return beta, f, it, True
            eta_run = eta
        if not (np.isfinite(fc) and np.all(np.isfinite(cand))):
            raise NumericError(f"non-finite iterate at iteration {it}")
        change = float(np.linalg.norm(cand - beta))
        beta, gb, f = cand, gc, fc
        if trace is not None:
            trace["objectives"].append(f)
            trace["iterates"].append(beta.copy())
        if change < opts.conv_tol:
            return beta, f, it, True
    return beta, f, opts.max_iters, False


def _initial_point(r, upsilon, budget, opts, proj_opts):
    if r == 0:
        nrm = float(np.linalg.norm(upsilon))
        if nrm > 0 and np.isfinite(nrm):
            start = upsilon / nrm
        else:
            start = np.zeros_like(upsilon)
    else:
        rng = np.random.default_rng([opts.seed, r])
        start = rng.standard_normal(upsilon.shape[0])
    return project_constraint_set(start, budget, proj_opts)


def solve(
    pair: SurrogatePair,
    budget: SparsityBudget,
    opts: SolverOptions = SolverOptions(),
    proj_opts: ProjectionOptions = ProjectionOptions(),
    trace: dict | None = None,
) -> Solution:
    """Minimize the surrogate quadratic over the constraint set.

    Step size is the reciprocal of a power-iteration estimate of gamma's
    spectral norm (inflated by 1.05 for safety); backtracking halves it
    under an Armijo test, which keeps the objective non-increasing even for
    indefinite gamma.  Restart 0 warms up at the projected, normalized
    upsilon (a noisy image of the target direction); further restarts
    project seeded Gaussian points.  The lowest objective wins; ties within
    1e-12 go to the lowest restart index.
    """
    gamma, upsilon = pair.gamma, pair.upsilon
    L = spectral_norm(gamma, opts.power_iters, opts.seed) * 1.05
    eta0 = 1.0 / max(L, 1e-12)

    best = None
    best_trace = None
    for r in range(opts.restarts + 1):
        beta0 = _initial_point(r, upsilon, budget, opts, proj_opts)
        r_trace = {} if trace is not None else None
        beta, f, iters, conv = _pgd(
            gamma, upsilon, budget, beta0, eta0, opts, proj_opts, r_trace
        )
        if best is None or f < best[1] - _TIE_TOL:
            best = (beta, f, iters, conv, r)
            best_trace = r_trace

    beta, _, iters, conv, r = best
    if trace is not None:
        trace.update(best_trace)
    return Solution(
        beta_hat=beta,
        objective=objective(gamma, upsilon, beta),
        iterations=iters,
        converged=conv,
        restart_index=r,
    )
