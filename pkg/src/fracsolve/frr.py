"""Ridge regression parameterized by the fraction of the unregularized norm.

Instead of choosing the penalty weight ``alpha`` directly, the solver takes
requested fractions ``gamma`` in [0, 1]: the ratio between the L2-norm of the
regularized solution and the L2-norm of the unregularized (OLS) solution.
For each target it evaluates the achievable fraction on an internal log-spaced
alpha grid, interpolates to find the alpha that realizes each requested
fraction, and assembles coefficients by scaling the OLS solution per
component with ``s_i^2 / (s_i^2 + alpha)``.

All heavy inputs (the decomposition, the shrinkage table) are computed once
and shared read-only across targets; per-target work operates on contiguous
column copies so that solving targets in a batch or one at a time produces
bit-identical results.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InternalInvariantError, InvalidInputError
from .evaluate import StandardizationRecord, restore_coefficients, standardize
from .linalg import (
    DEFAULT_TRUNCATION_TOL,
    RotatedProblem,
    as_design_matrix,
    as_target_block,
    decompose_design,
)

ALPHA_LOG_STEP = 0.2
ALPHA_LOG_MARGIN = 3.0
DEFAULT_FRACTIONS = np.round(np.arange(1, 21) * 0.05, 10)

# Tolerance for floating-point jitter when checking that the fraction curve
# is non-increasing along ascending alpha.
_MONOTONE_EPS = 1e-9


def as_fraction_grid(fractions) -> np.ndarray:
    """Validate requested fractions: strictly increasing values in [0, 1]."""
    fracs = np.atleast_1d(np.asarray(fractions, dtype=np.float64))
    if fracs.ndim != 1 or fracs.size < 1:
        raise InvalidInputError("at least one fraction is required")
    if not np.all(np.isfinite(fracs)):
        raise InvalidInputError("fractions must be finite")
    if np.any(fracs < 0.0) or np.any(fracs > 1.0):
        raise InvalidInputError("fractions must lie in [0, 1]")
    if fracs.size > 1 and not np.all(np.diff(fracs) > 0):
        raise InvalidInputError("fractions must be strictly increasing")
    return fracs


@dataclass(frozen=True)
class AlphaGrid:
    """Internal alpha candidates: a leading exact 0 followed by a log-spaced ramp."""

    alphas: np.ndarray
    log_step: float = ALPHA_LOG_STEP


def build_alpha_grid(singular_values) -> AlphaGrid:
    """Log-spaced alpha candidates spanning the design's spectral range.

    The ramp starts at ``1e-3 * s_min**2`` (well below where regularization
    has any effect) and ends at or above ``1e3 * s_max**2`` (well past full
    shrinkage), with consecutive points separated by exactly 0.2 decades.
    An exact 0 entry is prepended for the unregularized endpoint.
    """
    svals = np.atleast_1d(np.asarray(singular_values, dtype=np.float64))
    if svals.size < 1 or np.any(svals <= 0) or not np.all(np.isfinite(svals)):
        raise InvalidInputError("singular values must be positive and finite")
    lo = 2.0 * math.log10(float(np.min(svals))) - ALPHA_LOG_MARGIN
    hi = 2.0 * math.log10(float(np.max(svals))) + ALPHA_LOG_MARGIN
    n_steps = math.ceil((hi - lo) / ALPHA_LOG_STEP - 1e-9)
    exponents = lo + ALPHA_LOG_STEP * np.arange(n_steps + 1)
    alphas = np.concatenate(([0.0], 10.0 ** exponents))
    return AlphaGrid(alphas=alphas)


def shrinkage_factors(singular_values, grid: AlphaGrid) -> np.ndarray:
    """Per-component shrinkage ``s_i^2 / (s_i^2 + alpha_j)`` for every grid alpha.

    Returns an (r, m) matrix with entries in (0, 1]; the column for alpha = 0
    is exactly 1.
    """
    s2 = np.asarray(singular_values, dtype=np.float64) ** 2
    return s2[:, None] / (s2[:, None] + grid.alphas[None, :])


def gamma_curve(ols_column, sf: np.ndarray) -> np.ndarray:
    """Achieved norm fraction at every grid alpha for one target.

    ``gamma_j = ||sf[:, j] * ols|| / ||ols||``.  The first column of ``sf``
    must correspond to alpha = 0 (all ones), which pins ``gamma[0]`` to
    exactly 1.

    Raises
    ------
    InvalidInputError
        If the OLS column has zero norm (degenerate target; the caller is
        expected to screen these out and zero-fill).
    """
    w = np.asarray(ols_column, dtype=np.float64) ** 2
    msq = (sf * sf).T @ w
    if msq[0] == 0.0:
        raise InvalidInputError("OLS solution has zero norm; fraction is undefined")
    return np.sqrt(msq / msq[0])


def interpolate_alphas(gammas, grid: AlphaGrid, requested) -> np.ndarray:
    """Alpha values whose achieved fractions match the requested ones.

    Piecewise-linear interpolation of log10(alpha) as a function of gamma
    (the fraction is close to linear in log-alpha through the transition
    region, and raw alpha spans too many decades to interpolate directly).
    Endpoints are handled exactly: a requested fraction of 1 maps to alpha 0,
    and fractions at or below the smallest grid-achievable fraction map to
    the +inf sentinel (zero coefficients).
    """
    g = np.asarray(gammas, dtype=np.float64)
    fracs = as_fraction_grid(requested)
    rising = np.diff(g) > _MONOTONE_EPS
    if np.any(rising):
        raise InternalInvariantError(
            "fraction curve is not non-increasing along ascending alpha"
        )
    # Skip the alpha = 0 entry: it has no logarithm and gamma = 1 is exact.
    xp = g[:0:-1]
    fp = np.log10(grid.alphas[:0:-1])
    out = 10.0 ** np.interp(fracs, xp, fp)
    out[fracs <= g[-1]] = np.inf
    out[fracs == 1.0] = 0.0
    return out


def effective_dof(singular_values, alpha: float) -> float:
    """Model flexibility under the penalty: ``sum_i s_i^2 / (s_i^2 + alpha)``.

    Equals the rank at alpha = 0 and tends to 0 as alpha grows (the +inf
    sentinel returns exactly 0).
    """
    if alpha < 0:
        raise InvalidInputError("alpha must be non-negative")
    s2 = np.asarray(singular_values, dtype=np.float64) ** 2
    return float(np.sum(s2 / (s2 + alpha)))


def flat_spectrum_alpha(singular_value: float, fraction: float) -> float:
    """Closed-form alpha for a flat spectrum: ``s^2 * (1/gamma - 1)``.

    When all singular values equal ``s``, every target's norm fraction is
    ``s^2 / (s^2 + alpha)`` independent of the data, so the alpha achieving a
    requested fraction is analytic.  Exposed mainly as a test oracle.
    """
    if not (0.0 <= fraction <= 1.0):
        raise InvalidInputError(f"fraction must lie in [0, 1], got {fraction}")
    if singular_value <= 0:
        raise InvalidInputError("singular value must be positive")
    if fraction == 0.0:
        return math.inf
    return singular_value**2 * (1.0 / fraction - 1.0)


def ols_rotated(rp: RotatedProblem) -> np.ndarray:
    """Unregularized solution in rotated space: element (i, j) is ``ytilde_ij / s_i``."""
    return rp.rotated_targets / rp.singular_values[:, None]


@dataclass(frozen=True)
class FrrSolution:
    """Solver output.

    Attributes
    ----------
    coefficients : (p, f, t) array in original predictor scale.
    resolved_alphas : (f, t) array; +inf marks the full-regularization
        sentinel, NaN marks targets where no alpha is defined (degenerate).
    achieved_fractions : (f, t) array of the fractions actually realized
        (NaN for degenerate targets).
    degenerate_targets : indices of targets whose OLS solution has zero norm;
        their coefficient columns are all zero.
    intercepts : (f, t) array of intercepts, present only when the solve
        standardized its inputs; predictions are then ``X @ beta + intercept``.
    standardization : the record used to restore coefficients, if any.
    effective_rank : rank retained by the decomposition.
    """

    coefficients: np.ndarray
    resolved_alphas: np.ndarray
    achieved_fractions: np.ndarray
    degenerate_targets: tuple[int, ...]
    fractions: np.ndarray
    effective_rank: int
    intercepts: np.ndarray | None = None
    standardization: StandardizationRecord | None = None


@dataclass(frozen=True)
class SolveOptions:
    tol: float = DEFAULT_TRUNCATION_TOL
    standardize: str = "none"
    threads: int = 1


def solve_frr(X, Y, fractions=None, options: SolveOptions | None = None) -> FrrSolution:
    """Solve ridge regression at the requested norm fractions for every target.

    Pipeline: decompose the design, rotate targets, take the rotated OLS
    solution, evaluate the fraction curve on the internal alpha grid,
    interpolate each requested fraction to its alpha, scale the OLS
    coefficients per component, and rotate back.  Targets whose OLS solution
    has zero norm are reported as degenerate and zero-filled.

    Parameters
    ----------
    X, Y : design matrix (d, p) and targets (d, t); 1-D Y is one target.
    fractions : requested fractions in [0, 1], strictly increasing
        (default 0.05 ... 1.0 in steps of 0.05).
    options : truncation tolerance, standardization mode, thread count.
    """
    opts = options or SolveOptions()
    fracs = as_fraction_grid(DEFAULT_FRACTIONS if fractions is None else fractions)
    X = as_design_matrix(X)
    Y = as_target_block(Y, X.shape[0])

    record = None
    if opts.standardize != "none":
        X_fit, Y_fit, record = standardize(X, Y, opts.standardize)
    else:
        X_fit, Y_fit = X, Y

    rp = decompose_design(X_fit, Y_fit, tol=opts.tol)
    grid = build_alpha_grid(rp.singular_values)
    sf = shrinkage_factors(rp.singular_values, grid)

    p = rp.n_predictors
    t = rp.n_targets
    f = fracs.size
    coef = np.empty((p, f, t))
    alphas = np.empty((f, t))
    achieved = np.empty((f, t))
    degenerate: list[int] = []

    # Shared read-only tables for the per-target loop.
    s2 = rp.singular_values**2
    sf2t = np.ascontiguousarray((sf * sf).T)
    xp_order = slice(None, 0, -1)  # reversed, excluding the alpha = 0 entry
    log_alpha = np.log10(grid.alphas[xp_order])

    def run_target(j: int) -> None:
        ytil = np.ascontiguousarray(rp.rotated_targets[:, j])
        ols = ytil / rp.singular_values
        w = ols * ols
        msq = sf2t @ w
        if msq[0] == 0.0:
            degenerate.append(j)
            coef[:, :, j] = 0.0
            alphas[:, j] = np.nan
            achieved[:, j] = np.nan
            return
        gam = np.sqrt(msq / msq[0])
        if np.any(np.diff(gam) > _MONOTONE_EPS):
            raise InternalInvariantError(
                f"fraction curve for target {j} is not non-increasing"
            )
        a_star = 10.0 ** np.interp(fracs, gam[xp_order], log_alpha)
        a_star[fracs <= gam[-1]] = np.inf
        a_star[fracs == 1.0] = 0.0
        sf_star = s2[:, None] / (s2[:, None] + a_star[None, :])
        achieved[:, j] = np.sqrt((sf_star * sf_star).T @ w / msq[0])
        alphas[:, j] = a_star
        coef[:, :, j] = rp.right_basis @ (ols[:, None] * sf_star)

    threads = max(1, int(opts.threads))
    if threads == 1 or t == 1:
        for j in range(t):
            run_target(j)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run_target, range(t)))
    degenerate.sort()

    intercepts = None
    if record is not None and record.mode != "none":
        coef, intercepts = restore_coefficients(coef, record)

    return FrrSolution(
        coefficients=coef,
        resolved_alphas=alphas,
        achieved_fractions=achieved,
        degenerate_targets=tuple(degenerate),
        fractions=fracs,
        effective_rank=rp.effective_rank,
        intercepts=intercepts,
        standardization=record,
    )
