"""Ridge regression with the penalty chosen by target norm fraction.

The solver takes fractions in [0, 1] of the unregularized solution's L2-norm
instead of raw penalty weights, resolves the matching penalty per target on a
log-spaced internal grid, and returns coefficients, resolved penalties, and
achieved fractions.  Companion modules provide standard ridge baselines,
cross-validation, synthetic problem generation, benchmarking, file formats,
and a CLI.
"""

__version__ = "0.1.0"

from .baselines import solve_ridge_naive, solve_ridge_rotated
from .errors import (
    DegenerateDesignError,
    FracsolveError,
    InternalInvariantError,
    InvalidInputError,
    UndefinedScoreError,
)
from .evaluate import (
    CvReport,
    StandardizationRecord,
    cross_validate,
    r_squared,
    restore_coefficients,
    split_holdout,
    standardize,
)
from .frr import (
    AlphaGrid,
    DEFAULT_FRACTIONS,
    FrrSolution,
    SolveOptions,
    build_alpha_grid,
    effective_dof,
    flat_spectrum_alpha,
    gamma_curve,
    interpolate_alphas,
    ols_rotated,
    shrinkage_factors,
    solve_frr,
)
from .linalg import RotatedProblem, decompose_design, unrotate_coefficients
from .simulate import SimulationSpec, simulate_design, simulate_targets

__all__ = [
    "__version__",
    "AlphaGrid",
    "CvReport",
    "DEFAULT_FRACTIONS",
    "DegenerateDesignError",
    "FracsolveError",
    "FrrSolution",
    "InternalInvariantError",
    "InvalidInputError",
    "RotatedProblem",
    "SimulationSpec",
    "SolveOptions",
    "StandardizationRecord",
    "UndefinedScoreError",
    "build_alpha_grid",
    "cross_validate",
    "decompose_design",
    "effective_dof",
    "flat_spectrum_alpha",
    "gamma_curve",
    "interpolate_alphas",
    "ols_rotated",
    "r_squared",
    "restore_coefficients",
    "shrinkage_factors",
    "simulate_design",
    "simulate_targets",
    "solve_frr",
    "solve_ridge_naive",
    "solve_ridge_rotated",
    "split_holdout",
    "standardize",
    "unrotate_coefficients",
]
