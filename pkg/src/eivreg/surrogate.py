"""Corrected second-moment surrogates computed from corrupted observations.

``gamma`` is the Gram matrix of the observed design with the known
corruption variance subtracted from the diagonal; it is an unbiased
estimate of the clean covariance but may be indefinite when m < n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import as_matrix, as_square_symmetric, as_vector, check_same_length
from .errors import DimensionError, DomainError


@dataclass(frozen=True)
class SurrogatePair:
    """(gamma, upsilon): corrected moment estimates driving the estimator."""

    gamma: np.ndarray
    upsilon: np.ndarray

    def __post_init__(self):
        g = as_square_symmetric(self.gamma, "gamma")
        u = as_vector(self.upsilon, "upsilon")
        if u.shape[0] != g.shape[0]:
            raise DimensionError(
                f"upsilon has length {u.shape[0]}, gamma is {g.shape[0]}x{g.shape[0]}"
            )

    @property
    def n(self) -> int:
        return self.gamma.shape[0]


def compute_gamma(Z, sigma_w2: float) -> np.ndarray:
    """sym(Z'Z/m) - sigma_w2 * I, symmetrized explicitly so downstream
    eigen-probes see an exactly symmetric matrix."""
    Zm = as_matrix(Z, "Z")
    if sigma_w2 < 0:
        raise DomainError(f"sigma_w2 must be >= 0, got {sigma_w2}")
    m = Zm.shape[0]
    G = Zm.T @ Zm / m
    G = 0.5 * (G + G.T)
    return G - sigma_w2 * np.eye(Zm.shape[1])


def compute_upsilon(Z, y) -> np.ndarray:
    """Z'y/m."""
    Zm = as_matrix(Z, "Z")
    yv = as_vector(y, "y")
    check_same_length(Zm, yv, "Z rows", "y")
    return Zm.T @ yv / Zm.shape[0]


def deviation_inf(pair: SurrogatePair, beta_star) -> float:
    """max_j |upsilon_j - (gamma beta_star)_j|, the statistic whose
    sqrt(log n / m) scaling controls the estimator's error."""
    b = as_vector(beta_star, "beta_star")
    if b.shape[0] != pair.n:
        raise DimensionError(
            f"beta_star has length {b.shape[0]}, expected {pair.n}"
        )
    return float(np.max(np.abs(pair.upsilon - pair.gamma @ b)))
