"""KL divergence between the observation laws induced by two coefficient
vectors, conditional on the observed design.

Conditioning the response on a row of the corrupted design gives a scalar
Gaussian whose mean is a fixed multiple of the linear predictor and whose
variance is independent of the row.  The product over rows yields a
closed-form divergence; a general three-term form covers non-unit
coefficient norms, and a Monte-Carlo estimator provides an independent
check of both.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import as_matrix, as_vector, check_same_length
from .errors import (
    ContractError,
    DegenerateDistributionError,
    DimensionError,
    DomainError,
)
from .model import NoiseModel

_UNIT_TOL = 1e-9
_MC_BLOCK = 1 << 15


@dataclass(frozen=True)
class ConditionalLaw:
    """Law of one response entry given its observed covariate row:
    Normal(mean_coeff * <beta, z_row>, variance)."""

    mean_coeff: float
    variance: float


def _check_unit(beta: np.ndarray, name: str) -> None:
    nrm = float(np.linalg.norm(beta))
    if abs(nrm - 1.0) > _UNIT_TOL:
        raise ContractError(f"{name} must have unit l2 norm, got {nrm}")


def _check_not_degenerate(noise: NoiseModel) -> None:
    if noise.sigma_w2 == 0.0 and noise.sigma_e2 == 0.0:
        raise DegenerateDistributionError(
            "sigma_w = sigma_e = 0: the conditional law is a point mass"
        )


def _sigma_beta2(norm2: float, noise: NoiseModel) -> float:
    """Conditional response variance for a coefficient vector with squared
    norm ``norm2``."""
    sx2, sz2 = noise.sigma_x2, noise.sigma_z2
    return (sx2 - sx2 * sx2 / sz2) * norm2 + noise.sigma_e2


def conditional_params(beta, noise: NoiseModel) -> ConditionalLaw:
    """Parameters of the per-row conditional law for a unit-norm beta."""
    b = as_vector(beta, "beta")
    _check_unit(b, "beta")
    _check_not_degenerate(noise)
    return ConditionalLaw(
        mean_coeff=noise.sigma_x2 / noise.sigma_z2,
        variance=_sigma_beta2(1.0, noise),
    )


def kl_closed_form(beta, beta_prime, Z, noise: NoiseModel) -> float:
    """Closed-form divergence for unit-norm coefficient vectors:
    sx^4 / (2 sz^2 (sx^2 sw^2 + sz^2 se^2)) * ||Z (beta - beta')||_2^2."""
    b = as_vector(beta, "beta")
    bp = as_vector(beta_prime, "beta_prime")
    check_same_length(b, bp, "beta", "beta_prime")
    Zm = as_matrix(Z, "Z")
    if Zm.shape[1] != b.shape[0]:
        raise DimensionError(
            f"Z has {Zm.shape[1]} columns but beta has length {b.shape[0]}"
        )
    _check_unit(b, "beta")
    _check_unit(bp, "beta_prime")
    _check_not_degenerate(noise)
    sx2, sw2, se2 = noise.sigma_x2, noise.sigma_w2, noise.sigma_e2
    sz2 = noise.sigma_z2
    coef = sx2 * sx2 / (2.0 * sz2 * (sx2 * sw2 + sz2 * se2))
    return float(coef * np.sum((Zm @ (b - bp)) ** 2))


def kl_general_gaussian(beta, beta_prime, Z, noise: NoiseModel) -> float:
    """Three-term divergence valid for arbitrary coefficient norms:

        m/2 * log(s'^2 / s^2) + m/2 * (s^2 / s'^2 - 1)
        + ||(sx^2 / sz^2) Z (beta - beta')||_2^2 / (2 s'^2)

    where s^2 and s'^2 are the conditional variances of the two laws.  For
    unit norms the variances coincide and this reduces to the closed form.
    """
    b = as_vector(beta, "beta")
    bp = as_vector(beta_prime, "beta_prime")
    check_same_length(b, bp, "beta", "beta_prime")
    Zm = as_matrix(Z, "Z")
    if Zm.shape[1] != b.shape[0]:
        raise DimensionError(
            f"Z has {Zm.shape[1]} columns but beta has length {b.shape[0]}"
        )
    m = Zm.shape[0]
    s2 = _sigma_beta2(float(b @ b), noise)
    sp2 = _sigma_beta2(float(bp @ bp), noise)
    if s2 <= 0.0 or sp2 <= 0.0:
        raise DegenerateDistributionError(
            f"nonpositive conditional variances ({s2}, {sp2})"
        )
    mean_coeff = noise.sigma_x2 / noise.sigma_z2
    quad = float(np.sum((mean_coeff * (Zm @ (b - bp))) ** 2))
    return float(
        0.5 * m * np.log(sp2 / s2) + 0.5 * m * (s2 / sp2 - 1.0) + quad / (2.0 * sp2)
    )


def kl_monte_carlo(
    beta, beta_prime, Z, noise: NoiseModel, samples: int, seed: int
) -> tuple[float, float]:
    """Unbiased sample-mean estimate of the divergence, with standard error.

    Responses are drawn from the first law in fixed-size blocks, each block
    from its own seeded substream; block sums are combined in block order,
    so the estimate is reproducible and block-parallelizable.  Returns
    (estimate, standard_error); the standard error is NaN for samples < 2.
    """
    b = as_vector(beta, "beta")
    bp = as_vector(beta_prime, "beta_prime")
    check_same_length(b, bp, "beta", "beta_prime")
    Zm = as_matrix(Z, "Z")
    if Zm.shape[1] != b.shape[0]:
        raise DimensionError(
            f"Z has {Zm.shape[1]} columns but beta has length {b.shape[0]}"
        )
    if samples < 1:
        raise DomainError(f"samples must be >= 1, got {samples}")
    m = Zm.shape[0]
    s2 = _sigma_beta2(float(b @ b), noise)
    sp2 = _sigma_beta2(float(bp @ bp), noise)
    if s2 <= 0.0 or sp2 <= 0.0:
        raise DegenerateDistributionError(
            f"nonpositive conditional variances ({s2}, {sp2})"
        )
    mean_coeff = noise.sigma_x2 / noise.sigma_z2
    mu = mean_coeff * (Zm @ b)
    mu_p = mean_coeff * (Zm @ bp)
    const = 0.5 * m * np.log(sp2 / s2)
    sd = np.sqrt(s2)

    total = 0.0
    total_sq = 0.0
    done = 0
    block_index = 0
    while done < samples:
        count = min(_MC_BLOCK, samples - done)
        rng = np.random.default_rng([seed, block_index])
        y = mu[None, :] + sd * rng.standard_normal((count, m))
        ratios = (
            const
            + np.sum((y - mu_p[None, :]) ** 2, axis=1) / (2.0 * sp2)
            - np.sum((y - mu[None, :]) ** 2, axis=1) / (2.0 * s2)
        )
        total += float(np.sum(ratios))
        total_sq += float(np.sum(ratios**2))
        done += count
        block_index += 1

    estimate = total / samples
    if samples > 1:
        var = max(total_sq - samples * estimate * estimate, 0.0) / (samples - 1)
        std_error = float(np.sqrt(var / samples))
    else:
        std_error = float("nan")
    return estimate, std_error
