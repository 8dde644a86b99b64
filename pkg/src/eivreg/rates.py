"""Theoretical error-rate curves (constants set to 1) and log-log slope
fitting for empirical exponent recovery.

The level of each curve is meaningful only up to an unspecified universal
constant; every consumer should compare exponents, not levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError
from .model import NoiseModel, ProblemShape, SparsityBudget


@dataclass(frozen=True)
class RateInputs:
    p: float
    budget: SparsityBudget
    shape: ProblemShape
    noise: NoiseModel
    kappa_c: float
    kappa_l: float

    def __post_init__(self):
        if self.p < 1:
            raise DomainError(f"p must be >= 1, got {self.p}")
        if self.kappa_c <= 0:
            raise DomainError(f"kappa_c must be > 0, got {self.kappa_c}")
        if self.kappa_l <= 0:
            raise DomainError(f"kappa_l must be > 0, got {self.kappa_l}")


def lower_bound_rate(inputs: RateInputs) -> float:
    """Worst-case lower-bound curve for the p-th power loss:

        [sz^2 (sx^2 sw^2 + sz^2 se^2) / (sx^4 kc^2)]^((p-q)/2)
        * radius * (log n / m)^((p-q)/2)
    """
    q = inputs.budget.q
    n, m = inputs.shape.n, inputs.shape.m
    if n < 2:
        raise DomainError("rate evaluation needs n >= 2 so that log n > 0")
    if inputs.p <= q:
        raise DomainError(f"p must exceed q, got p = {inputs.p}, q = {q}")
    sx2, sw2, se2 = inputs.noise.sigma_x2, inputs.noise.sigma_w2, inputs.noise.sigma_e2
    sz2 = inputs.noise.sigma_z2
    half_exp = (inputs.p - q) / 2.0
    prefactor = (sz2 * (sx2 * sw2 + sz2 * se2) / (sx2**2 * inputs.kappa_c**2)) ** half_exp
    return float(prefactor * inputs.budget.radius * (math.log(n) / m) ** half_exp)


def upper_bound_rate(inputs: RateInputs) -> float:
    """Achievable upper-bound curve for the squared l2 loss:

        [(sz^(2-q) (sw + se)^(2-q) + kl^(1-q)) / kl^(2-q)]
        * radius * (log n / m)^(1 - q/2)
    """
    q = inputs.budget.q
    n, m = inputs.shape.n, inputs.shape.m
    if n < 2:
        raise DomainError("rate evaluation needs n >= 2 so that log n > 0")
    sz = math.sqrt(inputs.noise.sigma_z2)
    sw = math.sqrt(inputs.noise.sigma_w2)
    se = math.sqrt(inputs.noise.sigma_e2)
    kl = inputs.kappa_l
    bracket = (sz ** (2.0 - q) * (sw + se) ** (2.0 - q) + kl ** (1.0 - q)) / kl ** (
        2.0 - q
    )
    return float(
        bracket * inputs.budget.radius * (math.log(n) / m) ** (1.0 - q / 2.0)
    )


def rate_ratio_p2(inputs: RateInputs) -> float:
    """upper_bound_rate / lower_bound_rate at p = 2.  Both curves share the
    factor radius * (log n / m)^(1 - q/2), so the ratio depends only on
    (q, noise, kappa_c, kappa_l)."""
    at_p2 = replace(inputs, p=2.0)
    return upper_bound_rate(at_p2) / lower_bound_rate(at_p2)


def fit_rate_exponent(points) -> tuple[float, float, float]:
    """Ordinary least squares of log y on log x.

    Returns (slope, intercept, r2).  Needs at least two points with
    positive coordinates and non-constant x.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise DomainError("fit needs at least 2 (x, y) points")
    if np.any(pts <= 0):
        raise DomainError("all coordinates must be > 0 for a log-log fit")
    lx = np.log(pts[:, 0])
    ly = np.log(pts[:, 1])
    if float(lx.max() - lx.min()) == 0.0:
        raise DomainError("x values must not all be equal")
    A = np.column_stack([lx, np.ones_like(lx)])
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    slope, intercept = float(coef[0]), float(coef[1])
    resid = ly - A @ coef
    ss_res = float(resid @ resid)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    if ss_tot > 0.0:
        r2 = 1.0 - ss_res / ss_tot
    else:
        r2 = 1.0 if ss_res < 1e-24 else 0.0
    return slope, intercept, r2
