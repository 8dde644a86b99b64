"""Input validation helpers used by every public entry point."""

from __future__ import annotations

import numpy as np

from .errors import ContractError, DimensionError


def as_vector(x, name: str = "x") -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be a 1-d vector, got shape {arr.shape}")
    return arr


def as_matrix(x, name: str = "x") -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be a 2-d matrix, got shape {arr.shape}")
    return arr


def check_same_length(a: np.ndarray, b: np.ndarray, name_a: str, name_b: str) -> None:
    if a.shape[0] != b.shape[0]:
        raise DimensionError(
            f"{name_a} has length {a.shape[0]} but {name_b} has length {b.shape[0]}"
        )


def as_square_symmetric(x, name: str = "matrix") -> np.ndarray:
    """Require an exactly symmetric square matrix (symmetrize upstream)."""
    arr = as_matrix(x, name)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {arr.shape}")
    if not np.array_equal(arr, arr.T):
        raise ContractError(f"{name} must be exactly symmetric")
    return arr
