"""Brute-force references for the solver at tiny dimension.

Test support only: never invoked by the experiment harness.  Grid points
are admitted with a feasibility slack of (box_radius / resolution) times
the grid dimension, which keeps thin constraint sets from emptying the
grid; ties in the objective go to the lexicographically smallest point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ._validation import as_square_symmetric, as_vector
from .errors import CapacityError, DomainError
from .model import SparsityBudget

_GRID_MAX_DIM = 3
_ENUM_MAX_DIM = 12
_ENUM_MAX_SUPPORT = 3


@dataclass(frozen=True)
class GridSpec:
    resolution: int          # points per axis; odd so 0 is on-grid
    box_radius: float = 1.0  # grid spans [-box_radius, box_radius] per axis

    def __post_init__(self):
        if self.resolution < 3 or self.resolution % 2 == 0:
            raise DomainError("resolution must be odd and >= 3")
        if self.box_radius <= 0:
            raise DomainError("box_radius must be > 0")


def _slice_best(points, gamma, upsilon, feasible):
    """Best feasible point of one axis-0 slice, or None."""
    f = 0.5 * np.einsum("pi,pi->p", points @ gamma, points) - points @ upsilon
    f = np.where(feasible, f, np.inf)
    idx = int(np.argmin(f))  # first occurrence = lexicographically smallest
    if not np.isfinite(f[idx]):
        return None
    return points[idx], float(f[idx])


def grid_minimize(gamma, upsilon, budget: SparsityBudget, grid: GridSpec):
    """Exhaustive minimization of the surrogate quadratic over feasible grid
    points in up to 3 dimensions.  Returns (beta, objective)."""
    g = as_square_symmetric(gamma, "gamma")
    u = as_vector(upsilon, "upsilon")
    n = g.shape[0]
    if u.shape[0] != n:
        raise DomainError("gamma and upsilon dimensions disagree")
    if n > _GRID_MAX_DIM:
        raise CapacityError(f"grid_minimize supports n <= {_GRID_MAX_DIM}, got {n}")

    axis = np.linspace(-grid.box_radius, grid.box_radius, grid.resolution)
    slack = (grid.box_radius / grid.resolution) * n
    best_point, best_f = None, np.inf

    if n == 1:
        points = axis[:, None]
        feas = _membership_mask(points, budget, slack)
        res = _slice_best(points, g, u, feas)
        if res is not None:
            best_point, best_f = res
    else:
        tail = np.stack(
            np.meshgrid(*([axis] * (n - 1)), indexing="ij"), axis=-1
        ).reshape(-1, n - 1)
        for x0 in axis:  # ascending, so earlier slices are lexicographically first
            points = np.column_stack([np.full(tail.shape[0], x0), tail])
            feas = _membership_mask(points, budget, slack)
            res = _slice_best(points, g, u, feas)
            if res is not None and res[1] < best_f:
                best_point, best_f = res

    if best_point is None:
        raise DomainError("no feasible grid point; refine the grid or budget")
    return best_point.copy(), best_f


def _membership_mask(points, budget: SparsityBudget, slack: float):
    if budget.q == 0.0:
        lq = np.count_nonzero(np.abs(points) > 1e-12, axis=1)
    else:
        lq = np.sum(np.abs(points) ** budget.q, axis=1)
    l2 = np.linalg.norm(points, axis=1)
    return (lq <= budget.radius + slack) & (l2 <= 1.0 + slack)


def support_enumerate_minimize(gamma, upsilon, R0: int, grid: GridSpec):
    """Exact-sparse reference: grid-minimize restricted to every support of
    size <= R0 inside the unit l2-ball, and return the best across supports.

    Equal objectives across supports resolve to the lexicographically
    smallest full vector.  Returns (beta, objective).
    """
    g = as_square_symmetric(gamma, "gamma")
    u = as_vector(upsilon, "upsilon")
    n = g.shape[0]
    if u.shape[0] != n:
        raise DomainError("gamma and upsilon dimensions disagree")
    if R0 < 1:
        raise DomainError(f"R0 must be >= 1, got {R0}")
    if n > _ENUM_MAX_DIM or R0 > _ENUM_MAX_SUPPORT:
        raise CapacityError(
            f"support enumeration capped at n <= {_ENUM_MAX_DIM}, "
            f"R0 <= {_ENUM_MAX_SUPPORT}; got n = {n}, R0 = {R0}"
        )

    axis = np.linspace(-grid.box_radius, grid.box_radius, grid.resolution)
    best_point, best_f = np.zeros(n), np.inf
    for k in range(1, min(R0, n) + 1):
        slack = (grid.box_radius / grid.resolution) * k
        for support in itertools.combinations(range(n), k):
            sub_g = g[np.ix_(support, support)]
            sub_u = u[list(support)]
            if k == 1:
                pts = axis[:, None]
            else:
                pts = np.stack(
                    np.meshgrid(*([axis] * k), indexing="ij"), axis=-1
                ).reshape(-1, k)
            feas = np.linalg.norm(pts, axis=1) <= 1.0 + slack
            res = _slice_best(pts, sub_g, sub_u, feas)
            if res is None:
                continue
            full = np.zeros(n)
            full[list(support)] = res[0]
            if res[1] < best_f or (
                res[1] == best_f and tuple(full) < tuple(best_point)
            ):
                best_point, best_f = full, res[1]

    if not np.isfinite(best_f):
        raise DomainError("no feasible grid point on any support")
    return best_point, best_f
