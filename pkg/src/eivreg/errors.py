"""Exception types shared across the package.

Mapping used by the library:

* shape / length mismatches            -> DimensionError
* scalar or feasibility domain errors  -> DomainError (also covers bad fits,
  empty aggregations, and infeasible signal budgets; messages name the bound)
* broken object preconditions          -> ContractError
* KL with sigma_w = sigma_e = 0        -> DegenerateDistributionError
* brute-force size limits              -> CapacityError
* non-finite values during iteration   -> NumericError
* config-file problems                 -> ConfigError
"""


class DimensionError(ValueError):
    """Array shapes or lengths do not agree."""


class DomainError(ValueError):
    """A scalar argument or budget lies outside its admissible range."""


class ContractError(ValueError):
    """An object violates a documented precondition (e.g. asymmetry)."""


class DegenerateDistributionError(ValueError):
    """The conditional observation law collapses to a point mass."""


class CapacityError(ValueError):
    """A brute-force routine was asked to exceed its documented size cap."""


class NumericError(RuntimeError):
    """Non-finite values were produced during an iterative computation."""


class ConfigError(ValueError):
    """An experiment config file is malformed or has unknown keys."""
