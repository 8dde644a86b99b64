"""Core domain types plus the elementwise losses and quasi-norms.

All types are frozen dataclasses, safe to share across threads; the
operations are pure functions of their arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._validation import as_vector, check_same_length
from .errors import DomainError

# Entries with |b_j| <= ZERO_TOL count as zero for the q = 0 quasi-norm.
# Generated signals use exact zeros; solver output may carry rounding dust.
ZERO_TOL = 1e-12


@dataclass(frozen=True)
class NoiseModel:
    """Variance triple (sigma_x2, sigma_w2, sigma_e2) of the Gaussian data model."""

    sigma_x2: float
    sigma_w2: float
    sigma_e2: float

    def __post_init__(self):
        if not self.sigma_x2 > 0:
            raise DomainError(f"sigma_x2 must be > 0, got {self.sigma_x2}")
        if self.sigma_w2 < 0:
            raise DomainError(f"sigma_w2 must be >= 0, got {self.sigma_w2}")
        if self.sigma_e2 < 0:
            raise DomainError(f"sigma_e2 must be >= 0, got {self.sigma_e2}")

    @property
    def sigma_z2(self) -> float:
        """Variance of each observed covariate entry; always recomputed."""
        return self.sigma_x2 + self.sigma_w2


@dataclass(frozen=True)
class SparsityBudget:
    """Weak-sparsity constraint: the set of beta with sum_j |beta_j|^q <= radius."""

    q: float
    radius: float

    def __post_init__(self):
        if not 0.0 <= self.q <= 1.0:
            raise DomainError(f"q must lie in [0, 1], got {self.q}")
        if not self.radius > 0:
            raise DomainError(f"radius must be > 0, got {self.radius}")


@dataclass(frozen=True)
class ProblemShape:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1:
            raise DomainError(f"m must be >= 1, got {self.m}")
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")


@dataclass(frozen=True)
class HiddenTruth:
    """Ground truth behind a generated dataset, kept for evaluation only."""

    X: np.ndarray
    W: np.ndarray
    e: np.ndarray
    beta_star: np.ndarray


@dataclass(frozen=True)
class Dataset:
    """Observed pair (Z, y); hidden ground truth satisfies Z = X + W and
    y = X beta_star + e bit-exactly when present."""

    Z: np.ndarray
    y: np.ndarray
    hidden: Optional[HiddenTruth] = None


def lp_loss(beta_hat, beta_star, p: float) -> float:
    """Elementwise p-th power loss sum_j |a_j - b_j|^p for p >= 1."""
    a = as_vector(beta_hat, "beta_hat")
    b = as_vector(beta_star, "beta_star")
    check_same_length(a, b, "beta_hat", "beta_star")
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    return float(np.sum(np.abs(a - b) ** p))


def lq_quasinorm(beta, q: float) -> float:
    """sum_j |beta_j|^q for q in (0, 1]; the nonzero count for q = 0.

    An entry counts as nonzero iff |beta_j| > ZERO_TOL.
    """
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"q must lie in [0, 1], got {q}")
    b = as_vector(beta, "beta")
    if q == 0.0:
        return float(np.count_nonzero(np.abs(b) > ZERO_TOL))
    return float(np.sum(np.abs(b) ** q))


def in_constraint_set(beta, budget: SparsityBudget, tol: float = 0.0) -> bool:
    """Membership in the budget's quasi-norm ball intersected with the closed
    unit l2-ball, each relaxed by ``tol``."""
    b = as_vector(beta, "beta")
    if lq_quasinorm(b, budget.q) > budget.radius + tol:
        return False
    return float(np.linalg.norm(b)) <= 1.0 + tol
