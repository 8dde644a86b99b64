"""Seeded generation of weakly sparse signals and corrupted datasets.

All randomness flows through ``numpy.random.default_rng`` (PCG64 streams,
ziggurat normal sampling), so identical seeds reproduce identical arrays
across runs and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import as_vector
from .errors import ConfigError, DomainError
from .model import Dataset, HiddenTruth, NoiseModel, ProblemShape, SparsityBudget

_BISECT_TOL = 1e-10
_BISECT_MAX_ITERS = 200


@dataclass(frozen=True)
class SignalSpec:
    """Recipe for one ground-truth signal: dimension, budget, seed.

    Feasibility requires radius >= 1: a unit-l2 vector always has
    quasi-norm at least 1 for q <= 2, and the q = 0 case needs room for
    at least one nonzero entry.
    """

    n: int
    budget: SparsityBudget
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        if self.budget.radius < 1.0:
            raise DomainError(
                f"infeasible budget: radius {self.budget.radius} < 1, but any "
                f"unit-l2 vector has q={self.budget.q} quasi-norm >= 1"
            )


def _decay_quasinorm(n: int, q: float, alpha: float) -> float:
    """Quasi-norm of the unit-normalized decay profile j**(-alpha)."""
    a = np.arange(1, n + 1, dtype=float) ** (-alpha)
    a /= np.linalg.norm(a)
    return float(np.sum(a**q))


def generate_signal(spec: SignalSpec) -> np.ndarray:
    """Draw a unit-l2 vector inside the budget's quasi-norm ball.

    q = 0: support of size min(floor(radius), n) at random coordinates,
    magnitudes uniform on [0.5, 1.5] with random signs, normalized.

    q in (0, 1]: magnitudes j**(-alpha) assigned over a random coordinate
    permutation with random signs and normalized to unit l2.  alpha is the
    smallest exponent >= 1/q + 0.01 whose normalized profile meets the
    budget, found by bisection; if no decay profile fits, a flat k-sparse
    vector with k = floor(radius**(2/(2-q))) is used instead.
    """
    n, q, radius = spec.n, spec.budget.q, spec.budget.radius
    rng = np.random.default_rng(spec.seed)

    if q == 0.0:
        k = min(int(radius), n)
        support = rng.permutation(n)[:k]
        mags = rng.uniform(0.5, 1.5, size=k)
        signs = rng.choice([-1.0, 1.0], size=k)
        beta = np.zeros(n)
        beta[support] = mags * signs
        return beta / np.linalg.norm(beta)

    perm = rng.permutation(n)
    signs = rng.choice([-1.0, 1.0], size=n)
    alpha_min = 1.0 / q + 0.01

    if _decay_quasinorm(n, q, alpha_min) <= radius:
        alpha = alpha_min
    else:
        hi = alpha_min
        for _ in range(60):
            hi *= 2.0
            if _decay_quasinorm(n, q, hi) <= radius:
                break
        else:
            # No decay steep enough; use the flat k-sparse profile with
            # quasi-norm k**(1 - q/2) <= radius.
            k = max(1, min(n, int(radius ** (2.0 / (2.0 - q)))))
            beta = np.zeros(n)
            beta[perm[:k]] = signs[:k] / np.sqrt(k)
            return beta
        lo = hi / 2.0
        iters = 0
        while hi - lo > _BISECT_TOL and iters < _BISECT_MAX_ITERS:
            mid = 0.5 * (lo + hi)
            if _decay_quasinorm(n, q, mid) <= radius:
                hi = mid
            else:
                lo = mid
            iters += 1
        alpha = hi

    a = np.arange(1, n + 1, dtype=float) ** (-alpha)
    beta = np.zeros(n)
    beta[perm] = signs * a
    return beta / np.linalg.norm(beta)


def generate_dataset(
    shape: ProblemShape,
    noise: NoiseModel,
    beta_star,
    seed: int,
    keep_hidden: bool = True,
) -> Dataset:
    """Sample (X, W, e) i.i.d. Gaussian by the variance triple and assemble
    Z = X + W, y = X beta_star + e.

    The three blocks are drawn sequentially from one PCG64 stream, so they
    are mutually independent and the whole dataset is a pure function of
    (shape, noise, beta_star, seed).  ``keep_hidden=False`` drops the
    ground-truth arrays for memory-constrained sweeps.
    """
    beta = as_vector(beta_star, "beta_star")
    if beta.shape[0] != shape.n:
        raise DomainError(
            f"beta_star has length {beta.shape[0]}, expected n = {shape.n}"
        )
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((shape.m, shape.n)) * np.sqrt(noise.sigma_x2)
    W = rng.standard_normal((shape.m, shape.n)) * np.sqrt(noise.sigma_w2)
    e = rng.standard_normal(shape.m) * np.sqrt(noise.sigma_e2)
    Z = X + W
    y = X @ beta + e
    hidden = HiddenTruth(X=X, W=W, e=e, beta_star=beta.copy()) if keep_hidden else None
    return Dataset(Z=Z, y=y, hidden=hidden)


# ---------------------------------------------------------------------------
# Plain-text dataset dump
# ---------------------------------------------------------------------------
# Line-oriented format, whitespace-separated, floats printed with %.17g
# (17 significant digits round-trip float64 exactly):
#
#   eivreg-dataset 1
#   m <int> n <int>
#   sigma_x2 <float> sigma_w2 <float> sigma_e2 <float>
#   seed <int>
#   hidden <0|1>
#   Z        followed by m lines of n values (row-major)
#   y        followed by 1 line of m values
#   [X, W    as Z;  e as y;  beta_star as 1 line of n values]

_FMT = "%.17g"


def _write_matrix(fh, name: str, arr: np.ndarray) -> None:
    fh.write(name + "\n")
    for row in np.atleast_2d(arr):
        fh.write(" ".join(_FMT % v for v in row) + "\n")


def save_dataset(path, dataset: Dataset, noise: NoiseModel, seed: int) -> None:
    m, n = dataset.Z.shape
    with open(path, "w", encoding="ascii") as fh:
        fh.write("eivreg-dataset 1\n")
        fh.write(f"m {m} n {n}\n")
        fh.write(
            "sigma_x2 %s sigma_w2 %s sigma_e2 %s\n"
            % (_FMT % noise.sigma_x2, _FMT % noise.sigma_w2, _FMT % noise.sigma_e2)
        )
        fh.write(f"seed {seed}\n")
        fh.write(f"hidden {int(dataset.hidden is not None)}\n")
        _write_matrix(fh, "Z", dataset.Z)
        _write_matrix(fh, "y", dataset.y)
        if dataset.hidden is not None:
            _write_matrix(fh, "X", dataset.hidden.X)
            _write_matrix(fh, "W", dataset.hidden.W)
            _write_matrix(fh, "e", dataset.hidden.e)
            _write_matrix(fh, "beta_star", dataset.hidden.beta_star)


def _read_matrix(lines, idx: int, name: str, rows: int, cols: int):
    if lines[idx].strip() != name:
        raise ConfigError(f"expected section {name!r}, got {lines[idx]!r}")
    idx += 1
    block = np.array(
        [[float(v) for v in lines[idx + r].split()] for r in range(rows)]
    )
    if block.shape != (rows, cols):
        raise ConfigError(f"section {name!r} has shape {block.shape}, "
                          f"expected {(rows, cols)}")
    return block, idx + rows


def load_dataset(path):
    """Read a dump written by :func:`save_dataset`.

    Returns (dataset, noise, seed); bit-exact round trip for float64.
    """
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].strip() != "eivreg-dataset 1":
        raise ConfigError("not an eivreg-dataset file")
    tok = lines[1].split()
    m, n = int(tok[1]), int(tok[3])
    tok = lines[2].split()
    noise = NoiseModel(float(tok[1]), float(tok[3]), float(tok[5]))
    seed = int(lines[3].split()[1])
    has_hidden = bool(int(lines[4].split()[1]))
    idx = 5
    Z, idx = _read_matrix(lines, idx, "Z", m, n)
    y, idx = _read_matrix(lines, idx, "y", 1, m)
    hidden = None
    if has_hidden:
        X, idx = _read_matrix(lines, idx, "X", m, n)
        W, idx = _read_matrix(lines, idx, "W", m, n)
        e, idx = _read_matrix(lines, idx, "e", 1, m)
        bs, idx = _read_matrix(lines, idx, "beta_star", 1, n)
        hidden = HiddenTruth(X=X, W=W, e=e[0], beta_star=bs[0])
    return Dataset(Z=Z, y=y[0], hidden=hidden), noise, seed
