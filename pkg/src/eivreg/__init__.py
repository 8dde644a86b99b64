"""Sparse linear regression with additively corrupted covariates.

Corrected-moment estimation over weak-sparsity balls, closed-form and
Monte-Carlo KL divergences between induced observation laws, and a seeded
experiment harness for verifying error-rate exponents.
"""

from .conditions import ReProbeReport, column_norm_constant, re_probe
from .datagen import (
    SignalSpec,
    generate_dataset,
    generate_signal,
    load_dataset,
    save_dataset,
)
from .estimator import AdditiveErrorRegressor
from .harness import (
    ExperimentConfig,
    RateReport,
    TrialRecord,
    aggregate,
    config_from_dict,
    load_config,
    mix64,
    rate_report,
    read_records,
    records_to_csv,
    run_experiment,
    run_trial,
    write_records,
)
from .kl import (
    ConditionalLaw,
    conditional_params,
    kl_closed_form,
    kl_general_gaussian,
    kl_monte_carlo,
)
from .model import (
    Dataset,
    HiddenTruth,
    NoiseModel,
    ProblemShape,
    SparsityBudget,
    in_constraint_set,
    lp_loss,
    lq_quasinorm,
)
from .oracle import GridSpec, grid_minimize, support_enumerate_minimize
from .projections import (
    ProjectionOptions,
    project_constraint_set,
    project_l0,
    project_l1,
    project_lq,
)
from .rates import (
    RateInputs,
    fit_rate_exponent,
    lower_bound_rate,
    rate_ratio_p2,
    upper_bound_rate,
)
from .solver import SolverOptions, Solution, gradient, objective, solve, spectral_norm
from .surrogate import SurrogatePair, compute_gamma, compute_upsilon, deviation_inf

__version__ = "0.1.0"

__all__ = [
    "AdditiveErrorRegressor",
    "ConditionalLaw",
    "Dataset",
    "ExperimentConfig",
    "GridSpec",
    "HiddenTruth",
    "NoiseModel",
    "ProblemShape",
    "ProjectionOptions",
    "RateInputs",
    "RateReport",
    "ReProbeReport",
    "SignalSpec",
    "Solution",
    "SolverOptions",
    "SparsityBudget",
    "SurrogatePair",
    "TrialRecord",
    "aggregate",
    "column_norm_constant",
    "compute_gamma",
    "compute_upsilon",
    "conditional_params",
    "config_from_dict",
    "deviation_inf",
    "fit_rate_exponent",
    "generate_dataset",
    "generate_signal",
    "gradient",
    "grid_minimize",
    "in_constraint_set",
    "kl_closed_form",
    "kl_general_gaussian",
    "kl_monte_carlo",
    "load_config",
    "load_dataset",
    "lower_bound_rate",
    "lp_loss",
    "lq_quasinorm",
    "mix64",
    "objective",
    "project_constraint_set",
    "project_l0",
    "project_l1",
    "project_lq",
    "rate_ratio_p2",
    "rate_report",
    "re_probe",
    "read_records",
    "records_to_csv",
    "run_experiment",
    "run_trial",
    "save_dataset",
    "solve",
    "spectral_norm",
    "support_enumerate_minimize",
    "upper_bound_rate",
    "write_records",
]
