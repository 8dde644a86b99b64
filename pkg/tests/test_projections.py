import numpy as np
import pytest

from eivreg.errors import DomainError
from eivreg.model import SparsityBudget, in_constraint_set, lq_quasinorm
from eivreg.projections import (
    ProjectionOptions,
    project_constraint_set,
    project_l0,
    project_l1,
    project_lq,
)

from _oracles import l1_grid_oracle, lq_grid_oracle_distance

OPTS = ProjectionOptions()


class TestProjectL1:
    def test_single_active_coordinate(self):
        assert np.allclose(project_l1([3.0, 0.0], 1.0), [1.0, 0.0])

    def test_symmetry(self):
        assert np.allclose(project_l1([1.0, 1.0], 1.0), [0.5, 0.5])

    def test_feasible_unchanged(self):
        v = np.array([0.2, -0.3])
        assert np.array_equal(project_l1(v, 1.0), v)

    def test_matches_dense_grid_oracle(self):
        rng = np.random.default_rng(1234)
        for _ in range(25):
            v = rng.uniform(-3, 3, size=2)
            ours = project_l1(v, 1.0)
            oracle = l1_grid_oracle(v, 1.0)
            assert np.linalg.norm(ours - oracle) <= 1e-6

    def test_non_expansive(self):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            u = rng.uniform(-4, 4, size=6)
            v = rng.uniform(-4, 4, size=6)
            pu, pv = project_l1(u, 1.5), project_l1(v, 1.5)
            assert np.linalg.norm(pu - pv) <= np.linalg.norm(u - v) + 1e-10


class TestProjectL0:
    def test_keep_largest(self):
        assert np.array_equal(project_l0([3.0, 1.0, 2.0], 2), [3.0, 0.0, 2.0])

    def test_enough_budget_unchanged(self):
        v = np.array([1.0, 0.0, 2.0])
        assert np.array_equal(project_l0(v, 5), v)

    def test_tie_keeps_lower_index(self):
        assert np.array_equal(project_l0([1.0, 1.0, 0.0], 1), [1.0, 0.0, 0.0])


class TestProjectLq:
    def test_feasible_unchanged(self):
        v = np.array([0.5, 0.1])
        assert np.array_equal(project_lq(v, 0.5, 1.5, OPTS), v)

    def test_one_dimensional_boundary(self):
        out = project_lq(np.array([2.0]), 0.5, 1.0, OPTS)
        assert out[0] == pytest.approx(1.0, abs=1e-9)

    def test_matches_dense_grid_oracle_r3(self):
        rng = np.random.default_rng(77)
        v = rng.uniform(-2, 2, size=3)
        ours = project_lq(v, 0.5, 1.5, OPTS)
        assert lq_quasinorm(ours, 0.5) <= 1.5 + OPTS.feas_tol
        oracle_d = lq_grid_oracle_distance(v, 0.5, 1.5)
        assert np.linalg.norm(ours - v) <= oracle_d + 1e-6

    def test_beats_documented_heuristics(self):
        rng = np.random.default_rng(99)
        for _ in range(50):
            n = int(rng.integers(2, 10))
            v = rng.uniform(-3, 3, size=n)
            q, Rq = 0.5, 1.2
            ours = np.linalg.norm(project_lq(v, q, Rq, OPTS) - v)
            lqv = np.sum(np.abs(v) ** q)
            if lqv <= Rq:
                assert ours == 0.0
                continue
            radial = (Rq / lqv) ** (1 / q) * v
            assert ours <= np.linalg.norm(radial - v) + OPTS.feas_tol
            for k in range(1, n + 1):
                keep = np.argsort(-np.abs(v), kind="stable")[:k]
                cand = np.zeros(n)
                cand[keep] = v[keep]
                s = np.sum(np.abs(cand) ** q)
                if s > Rq:
                    cand *= (Rq / s) ** (1 / q)
                assert ours <= np.linalg.norm(cand - v) + OPTS.feas_tol

    def test_near_l1_consistency(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            v = rng.uniform(-2, 2, size=5)
            d_lq = np.linalg.norm(project_lq(v, 0.999, 1.0, OPTS) - v)
            d_l1 = np.linalg.norm(project_l1(v, 1.0) - v)
            assert d_lq <= d_l1 + 1e-2

    def test_q_domain(self):
        with pytest.raises(DomainError):
            project_lq(np.ones(2), 1.0, 1.0, OPTS)
        with pytest.raises(DomainError):
            project_lq(np.ones(2), 0.0, 1.0, OPTS)


class TestProjectConstraintSet:
    def test_feasible_unchanged(self):
        v = np.array([0.3, 0.4])
        out = project_constraint_set(v, SparsityBudget(1.0, 1.0), OPTS)
        assert np.array_equal(out, v)

    def test_l1_then_inside_ball(self):
        out = project_constraint_set(
            np.array([2.0, 0.0]), SparsityBudget(1.0, 1.0), OPTS
        )
        assert np.allclose(out, [1.0, 0.0], atol=1e-12)

    def test_l0_tie_then_l2_clip(self):
        out = project_constraint_set(
            np.array([2.0, 2.0]), SparsityBudget(0.0, 1.0), OPTS
        )
        assert np.allclose(out, [1.0, 0.0], atol=1e-12)

    def test_zero_input(self):
        for q in (0.0, 0.5, 1.0):
            out = project_constraint_set(np.zeros(4), SparsityBudget(q, 1.0), OPTS)
            assert np.array_equal(out, np.zeros(4))

    @pytest.mark.parametrize("q", [0.0, 0.5, 1.0])
    def test_feasibility_and_idempotence_1000_trials(self, q):
        rng = np.random.default_rng(int(q * 10) + 42)
        budget = SparsityBudget(q, 2.0)
        for _ in range(1000):
            v = rng.uniform(-3, 3, size=int(rng.integers(1, 9)))
            w = project_constraint_set(v, budget, OPTS)
            assert in_constraint_set(w, budget, tol=OPTS.feas_tol)
            w2 = project_constraint_set(w, budget, OPTS)
            assert np.linalg.norm(w2 - w) <= 1e-12

    def test_l2_clip_non_expansive(self):
        rng = np.random.default_rng(8)

        def clip(x):
            nrm = np.linalg.norm(x)
            return x / nrm if nrm > 1 else x

        for _ in range(1000):
            u = rng.uniform(-4, 4, size=5)
            v = rng.uniform(-4, 4, size=5)
            assert (
                np.linalg.norm(clip(u) - clip(v))
                <= np.linalg.norm(u - v) + 1e-10
            )

    @pytest.mark.parametrize("proj", [
        lambda v: project_l1(v, 1.3),
        lambda v: project_l0(v, 2),
        lambda v: project_lq(v, 0.5, 1.5, OPTS),
    ])
    def test_single_projection_idempotence(self, proj):
        rng = np.random.default_rng(21)
        for _ in range(200):
            v = rng.uniform(-3, 3, size=6)
            w = proj(v)
            assert np.linalg.norm(proj(w) - w) <= 1e-12
