"""Empirical checkers for the design conditions the theory relies on.

``column_norm_constant`` is exact.  ``re_probe`` samples restricted
directions and reports the minimum Rayleigh quotient observed: an UPPER
bound on the true restricted minimum, so it can refute a claimed curvature
level but never certify one (global verification over the doubled budget
ball is intractable).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._validation import as_matrix, as_square_symmetric
from .errors import DomainError
from .model import SparsityBudget, lq_quasinorm


@dataclass(frozen=True)
class ReProbeReport:
    kappa_l_hat: float           # minimum observed restricted Rayleigh quotient
    worst_direction: np.ndarray  # unit-l2 direction attaining it
    probes_run: int
    tau_assumed: float           # slack used when quoting the certificate form


def column_norm_constant(Z) -> float:
    """max_j ||Z[:, j]||_2 / sqrt(m), the column normalization constant."""
    Zm = as_matrix(Z, "Z")
    m = Zm.shape[0]
    return float(np.max(np.linalg.norm(Zm, axis=0)) / math.sqrt(m))


def _effective_support(budget: SparsityBudget, n: int, m: Optional[int]) -> int:
    if n >= 2 and m is not None:
        factor = (m / math.log(n)) ** (budget.q / 2.0)
    else:
        factor = 1.0
    return max(1, min(n, math.ceil(budget.radius * factor)))


def _feasible_sparse_direction(rng, n, budget, s):
    """Unit-l2 direction with support size <= s inside the doubled budget
    ball; the support is shrunk (largest entries kept) until feasible."""
    support = rng.permutation(n)[:s]
    vals = rng.standard_normal(s)
    if not np.any(vals):
        vals[0] = 1.0
    d = np.zeros(n)
    d[support] = vals
    d /= np.linalg.norm(d)
    if budget.q == 0.0:
        return d  # support size pre-clipped by the caller
    doubled = 2.0 * budget.radius
    if lq_quasinorm(d, budget.q) <= doubled:
        return d
    order = np.argsort(-np.abs(d), kind="stable")
    for k in range(s - 1, 0, -1):
        trimmed = np.zeros(n)
        keep = order[:k]
        trimmed[keep] = d[keep]
        trimmed /= np.linalg.norm(trimmed)
        if lq_quasinorm(trimmed, budget.q) <= doubled:
            return trimmed
    trimmed = np.zeros(n)
    trimmed[order[0]] = 1.0
    return trimmed


def re_probe(
    gamma,
    budget: SparsityBudget,
    probes: int,
    seed: int,
    m: Optional[int] = None,
    c1: float = 1.0,
) -> ReProbeReport:
    """Probe the restricted curvature of a symmetric matrix.

    The first min(n, probes) directions sweep the coordinate axes
    deterministically (each axis has quasi-norm 1, hence feasible whenever
    the doubled radius is >= 1); the remainder are random unit directions
    supported on 1, s_eff or 2*s_eff coordinates, where s_eff scales the
    budget radius by (m / log n)^(q/2).  Directions are generated
    sequentially from one seeded stream, so a longer run extends a shorter
    one probe-for-probe.

    ``m`` is the sample count behind gamma; it sets s_eff and the reported
    tau_assumed = c1 * radius * (log n / m)^(1 - q/2).  When omitted, the
    support scaling factor is 1 and tau_assumed is reported as 0.
    """
    g = as_square_symmetric(gamma, "gamma")
    n = g.shape[0]
    if probes < 1:
        raise DomainError("probes must be >= 1")
    if 2.0 * budget.radius < 1.0:
        raise DomainError(
            "doubled budget radius below 1: no unit-l2 direction is feasible"
        )

    s_eff = _effective_support(budget, n, m)
    supports = [1, s_eff, 2 * s_eff]
    if budget.q == 0.0:
        cap = max(1, int(2.0 * budget.radius))
        supports = [min(max(1, s), cap, n) for s in supports]
    else:
        supports = [min(max(1, s), n) for s in supports]

    rng = np.random.default_rng(seed)
    directions = []
    for j in range(min(n, probes)):
        d = np.zeros(n)
        d[j] = 1.0
        directions.append(d)
    for _ in range(probes - len(directions)):
        s = supports[int(rng.integers(len(supports)))]
        directions.append(_feasible_sparse_direction(rng, n, budget, s))

    D = np.array(directions)
    Dg = D @ g
    quotients = np.einsum("pi,pi->p", Dg, D) / np.einsum("pi,pi->p", D, D)
    idx = int(np.argmin(quotients))  # first occurrence wins ties
    worst = D[idx]
    kappa = float(worst @ (g @ worst)) / float(worst @ worst)

    if m is not None and n >= 2:
        tau = c1 * budget.radius * (math.log(n) / m) ** (1.0 - budget.q / 2.0)
    else:
        tau = 0.0
    return ReProbeReport(
        kappa_l_hat=kappa,
        worst_direction=worst,
        probes_run=probes,
        tau_assumed=tau,
    )
