"""Scikit-learn style front end for the corrected-moment estimator."""

from __future__ import annotations

from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from ._validation import as_matrix, as_vector, check_same_length
from .model import SparsityBudget
from .projections import ProjectionOptions
from .solver import SolverOptions, solve
from .surrogate import SurrogatePair, compute_gamma, compute_upsilon


class AdditiveErrorRegressor(RegressorMixin, BaseEstimator):
    """Sparse linear regression when the design is observed through additive
    noise of known variance.

    ``fit(Z, y)`` never sees the clean design: it corrects the Gram matrix
    of the observed covariates by ``sigma_w2`` and minimizes the resulting
    surrogate quadratic over the weak-sparsity ball (exponent ``q``, radius
    ``radius``) intersected with the unit l2-ball, by projected gradient
    descent with restarts.

    Parameters
    ----------
    sigma_w2 : known per-entry variance of the covariate corruption
    q : sparsity exponent in [0, 1] (0 = exact sparsity)
    radius : quasi-norm budget of the constraint set
    max_iters, step_rule, conv_tol, power_iters, restarts, seed :
        solver controls, see :class:`eivreg.solver.SolverOptions`
    feas_tol, max_cycles, bisect_tol :
        projection controls, see :class:`eivreg.projections.ProjectionOptions`

    Attributes
    ----------
    coef_ : fitted coefficient vector
    solution_ : full solver diagnostics (objective, iterations, restarts)
    n_features_in_ : number of columns seen during fit
    """

    def __init__(
        self,
        sigma_w2: float = 0.0,
        q: float = 0.0,
        radius: float = 1.0,
        max_iters: int = 10000,
        step_rule: str = "backtracking",
        conv_tol: float = 1e-8,
        power_iters: int = 100,
        restarts: int = 4,
        seed: int = 0,
        feas_tol: float = 1e-9,
        max_cycles: int = 100,
        bisect_tol: float = 1e-12,
    ):
        self.sigma_w2 = sigma_w2
        self.q = q
        self.radius = radius
        self.max_iters = max_iters
        self.step_rule = step_rule
        self.conv_tol = conv_tol
        self.power_iters = power_iters
        self.restarts = restarts
        self.seed = seed
        self.feas_tol = feas_tol
        self.max_cycles = max_cycles
        self.bisect_tol = bisect_tol

    def fit(self, Z, y):
        Zm = as_matrix(Z, "Z")
        yv = as_vector(y, "y")
        check_same_length(Zm, yv, "Z rows", "y")
        budget = SparsityBudget(self.q, self.radius)
        pair = SurrogatePair(
            gamma=compute_gamma(Zm, self.sigma_w2),
            upsilon=compute_upsilon(Zm, yv),
        )
        sol = solve(
            pair,
            budget,
            SolverOptions(
                max_iters=self.max_iters,
                step_rule=self.step_rule,
                conv_tol=self.conv_tol,
                power_iters=self.power_iters,
                restarts=self.restarts,
                seed=self.seed,
            ),
            ProjectionOptions(
                feas_tol=self.feas_tol,
                max_cycles=self.max_cycles,
                bisect_tol=self.bisect_tol,
            ),
        )
        self.coef_ = sol.beta_hat
        self.solution_ = sol
        self.n_features_in_ = Zm.shape[1]
        return self

    def predict(self, Z):
        if not hasattr(self, "coef_"):
            raise NotFittedError(
                "this AdditiveErrorRegressor instance is not fitted yet"
            )
        Zm = as_matrix(Z, "Z")
        if Zm.shape[1] != self.n_features_in_:
            raise ValueError(
                f"Z has {Zm.shape[1]} features, expected {self.n_features_in_}"
            )
        return Zm @ self.coef_
