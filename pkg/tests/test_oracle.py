import numpy as np
import pytest

from eivreg.errors import CapacityError
from eivreg.model import SparsityBudget, in_constraint_set
from eivreg.oracle import GridSpec, grid_minimize, support_enumerate_minimize
from eivreg.solver import SolverOptions, solve
from eivreg.surrogate import SurrogatePair

from _oracles import interior_instance


class TestGridSpec:
    def test_resolution_must_be_odd(self):
        with pytest.raises(Exception):
            GridSpec(resolution=400)
        with pytest.raises(Exception):
            GridSpec(resolution=1)


class TestGridMinimize:
    def test_origin_is_global_min(self):
        beta, obj = grid_minimize(
            np.eye(2), np.zeros(2), SparsityBudget(1.0, 1.0),
            GridSpec(resolution=41),
        )
        assert np.array_equal(beta, np.zeros(2))
        assert obj == 0.0

    def test_1d_boundary_optimum(self):
        beta, obj = grid_minimize(
            np.eye(1), np.array([5.0]), SparsityBudget(1.0, 1.0),
            GridSpec(resolution=401),
        )
        assert beta[0] == pytest.approx(1.0)
        assert obj == pytest.approx(-4.5)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            grid_minimize(np.eye(4), np.zeros(4), SparsityBudget(1.0, 1.0),
                          GridSpec(resolution=5))

    def test_outputs_feasible(self):
        rng = np.random.default_rng(31)
        grid = GridSpec(resolution=41)
        for _ in range(20):
            gamma, upsilon = interior_instance(rng, 2, upsilon_scale=1.0)
            budget = SparsityBudget(1.0, 1.0)
            beta, _ = grid_minimize(gamma, upsilon, budget, grid)
            slack = (grid.box_radius / grid.resolution) * 2
            assert in_constraint_set(beta, budget, tol=slack)

    def test_agrees_with_solver_at_1e4(self):
        rng = np.random.default_rng(32)
        budget = SparsityBudget(1.0, 1.0)
        grid = GridSpec(resolution=801)
        for _ in range(10):
            gamma, upsilon = interior_instance(rng, 2)
            sol = solve(SurrogatePair(gamma=gamma, upsilon=upsilon), budget)
            _, obj = grid_minimize(gamma, upsilon, budget, grid)
            assert obj == pytest.approx(sol.objective, abs=1e-4)

    def test_refinement_never_increases_objective(self):
        rng = np.random.default_rng(33)
        budget = SparsityBudget(1.0, 1.0)
        for _ in range(10):
            gamma, upsilon = interior_instance(rng, 2)
            _, coarse = grid_minimize(gamma, upsilon, budget,
                                      GridSpec(resolution=401))
            _, fine = grid_minimize(gamma, upsilon, budget,
                                    GridSpec(resolution=801))
            assert fine <= coarse + 1e-12


class TestSupportEnumerate:
    def test_zero_upsilon(self):
        beta, obj = support_enumerate_minimize(
            np.eye(4), np.zeros(4), 2, GridSpec(resolution=41)
        )
        assert np.array_equal(beta, np.zeros(4))
        assert obj == 0.0

    def test_clipped_single_coordinate(self):
        beta, obj = support_enumerate_minimize(
            np.diag([1.0, 1.0]), np.array([2.0, 0.0]), 1,
            GridSpec(resolution=401),
        )
        assert beta[0] == pytest.approx(1.0, abs=1e-8)
        assert beta[1] == 0.0
        assert obj == pytest.approx(-1.5, abs=1e-8)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            support_enumerate_minimize(np.eye(13), np.zeros(13), 2,
                                       GridSpec(resolution=5))
        with pytest.raises(CapacityError):
            support_enumerate_minimize(np.eye(4), np.zeros(4), 4,
                                       GridSpec(resolution=5))

    def test_cross_validates_solver(self):
        rng = np.random.default_rng(34)
        budget = SparsityBudget(0.0, 2.0)
        opts = SolverOptions(restarts=7, seed=5)
        grid = GridSpec(resolution=401)
        for _ in range(5):
            gamma, upsilon = interior_instance(rng, 6)
            sol = solve(SurrogatePair(gamma=gamma, upsilon=upsilon), budget, opts)
            _, obj = support_enumerate_minimize(gamma, upsilon, 2, grid)
            assert abs(sol.objective - obj) <= 1e-3


class TestSolverBeatsGrid:
    def test_convex_solver_at_most_grid(self):
        # the continuous solver must never lose to the discrete reference
        rng = np.random.default_rng(35)
        budget = SparsityBudget(1.0, 1.0)
        grid = GridSpec(resolution=801)
        for _ in range(10):
            gamma, upsilon = interior_instance(rng, 2)
            sol = solve(SurrogatePair(gamma=gamma, upsilon=upsilon), budget)
            _, obj = grid_minimize(gamma, upsilon, budget, grid)
            assert sol.objective <= obj + 1e-6
