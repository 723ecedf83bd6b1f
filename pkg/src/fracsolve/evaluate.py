"""Standardization, holdout splitting, scoring, and the cross-validation harness."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, UndefinedScoreError
from .linalg import as_design_matrix, as_target_block

STANDARDIZE_MODES = ("none", "center", "zscore")


@dataclass(frozen=True)
class StandardizationRecord:
    """What was subtracted from and divided out of a problem before fitting.

    ``column_scales`` are population standard deviations (1/d normalization);
    they are all ones unless mode is ``zscore``.  Target means are zero when
    mode is ``none``.
    """

    mode: str
    column_means: np.ndarray
    column_scales: np.ndarray
    target_means: np.ndarray


def standardize(X, Y, mode: str):
    """Center (and optionally scale) predictors, centering targets alongside.

    Returns ``(X', Y', record)``.  ``center`` subtracts column means from X
    and per-target means from Y; ``zscore`` additionally divides X columns by
    their population standard deviation.  Mode ``none`` is the identity with
    an all-zeros/ones record.

    Raises
    ------
    InvalidInputError
        If mode is unknown, or a column is constant under ``zscore``.
    """
    if mode not in STANDARDIZE_MODES:
        raise InvalidInputError(f"unknown standardization mode {mode!r}")
    X = as_design_matrix(X)
    Y = as_target_block(Y, X.shape[0])
    p = X.shape[1]
    t = Y.shape[1]
    if mode == "none":
        record = StandardizationRecord(mode, np.zeros(p), np.ones(p), np.zeros(t))
        return X, Y, record

    means = np.array([float(np.ascontiguousarray(X[:, j]).mean()) for j in range(p)])
    scales = np.ones(p)
    if mode == "zscore":
        scales = np.array([float(np.ascontiguousarray(X[:, j]).std()) for j in range(p)])
        constant = np.flatnonzero(scales == 0.0)
        if constant.size:
            raise InvalidInputError(
                f"cannot z-score constant predictor column(s) {constant.tolist()}"
            )
    # Per-column stats above are computed on contiguous copies so they match
    # bit-for-bit between batch and single-column calls.
    target_means = np.array(
        [float(np.ascontiguousarray(Y[:, j]).mean()) for j in range(t)]
    )
    X_out = (X - means) / scales
    Y_out = Y - target_means
    return X_out, Y_out, StandardizationRecord(mode, means, scales, target_means)


def restore_coefficients(beta_std, record: StandardizationRecord):
    """Undo standardization on fitted coefficients.

    ``beta_std`` has predictors on the first axis and targets on the last
    (e.g. (p, t) or (p, f, t)).  Returns ``(beta, intercepts)`` such that
    ``X @ beta + intercept`` on raw data reproduces the standardized-space
    predictions: ``beta_j = beta'_j / scale_j`` and
    ``intercept = target_mean - sum_j beta_j * mean_j``.
    """
    B = np.asarray(beta_std, dtype=np.float64)
    p = record.column_means.size
    if B.ndim < 1 or B.shape[0] != p:
        raise InvalidInputError(
            f"coefficients must have {p} predictors on axis 0, got shape {B.shape}"
        )
    if B.ndim < 2 or B.shape[-1] != record.target_means.size:
        raise InvalidInputError(
            f"coefficients must have {record.target_means.size} targets on the last axis"
        )
    shape = (p,) + (1,) * (B.ndim - 1)
    beta = B / record.column_scales.reshape(shape)
    intercepts = record.target_means - np.tensordot(record.column_means, beta, axes=(0, 0))
    return beta, intercepts


def split_holdout(n_points: int, train_fraction: float, seed: int):
    """Disjoint, exhaustive train/test index split, deterministic under seed.

    Indices are shuffled with a Philox generator and returned sorted within
    each side.  Train size is ``round(train_fraction * n_points)``.
    """
    if n_points < 2:
        raise InvalidInputError("need at least 2 points to split")
    if not (0.0 < train_fraction < 1.0):
        raise InvalidInputError(f"train fraction must be in (0, 1), got {train_fraction}")
    n_train = int(round(train_fraction * n_points))
    if n_train < 1 or n_train > n_points - 1:
        raise InvalidInputError(
            f"split {train_fraction} of {n_points} points leaves one side empty"
        )
    rng = np.random.Generator(np.random.Philox(seed))
    perm = rng.permutation(n_points)
    return np.sort(perm[:n_train]), np.sort(perm[n_train:])


def r_squared(y_true, y_pred, baseline: str = "mean") -> float:
    """Coefficient of determination ``1 - SS_res / SS_tot``; may be negative.

    ``baseline`` selects what SS_tot is measured against: the test-set mean
    (default) or zero (for data already centered elsewhere).

    Raises
    ------
    UndefinedScoreError
        If the baseline sum of squares is zero (constant truth under
        ``mean``, all-zero truth under ``zero``).
    """
    yt = np.asarray(y_true, dtype=np.float64).ravel()
    yp = np.asarray(y_pred, dtype=np.float64).ravel()
    if yt.size != yp.size:
        raise InvalidInputError("prediction and truth lengths differ")
    if yt.size < 2:
        raise InvalidInputError("need at least 2 observations to score")
    if baseline == "mean":
        ss_tot = float(np.sum((yt - yt.mean()) ** 2))
    elif baseline == "zero":
        ss_tot = float(np.sum(yt**2))
    else:
        raise InvalidInputError(f"unknown baseline {baseline!r}")
    if ss_tot == 0.0:
        raise UndefinedScoreError("target has zero variance on the evaluation set")
    ss_res = float(np.sum((yt - yp) ** 2))
    return 1.0 - ss_res / ss_tot


@dataclass(frozen=True)
class TargetReport:
    """Cross-validation outcome for one target.

    ``flagged`` is set (with NaN scores) when the target cannot be scored,
    e.g. zero variance on the test side.
    """

    target_index: int
    r2_by_fraction: np.ndarray
    best_fraction: float
    best_r2: float
    best_alpha: float
    flagged: bool = False
    flag_reason: str = ""


@dataclass(frozen=True)
class CvReport:
    fractions: np.ndarray
    train_indices: np.ndarray
    test_indices: np.ndarray
    per_target: tuple[TargetReport, ...]


def cross_validate(X, Y, fractions, split, mode: str = "none",
                   tol: float | None = None, threads: int = 1) -> CvReport:
    """Fit at every fraction on the training side, score R2 on the test side.

    ``split`` is a ``(train_indices, test_indices)`` pair, typically from
    :func:`split_holdout`.  The best fraction per target maximizes test R2,
    with ties resolved toward the smallest fraction (more regularization).
    """
    from .frr import SolveOptions, solve_frr  # deferred: frr imports this module

    X = as_design_matrix(X)
    Y = as_target_block(Y, X.shape[0])
    train, test = (np.asarray(s, dtype=np.intp) for s in split)
    if train.size == 0 or test.size == 0:
        raise InvalidInputError("both split sides must be non-empty")
    if np.intersect1d(train, test).size:
        raise InvalidInputError("train and test indices overlap")

    opts = SolveOptions(standardize=mode, threads=threads)
    if tol is not None:
        opts = SolveOptions(tol=tol, standardize=mode, threads=threads)
    fit = solve_frr(X[train], Y[train], fractions, opts)

    preds = np.einsum("np,pft->nft", X[test], fit.coefficients)
    if fit.intercepts is not None:
        preds = preds + fit.intercepts[None, :, :]

    f = fit.fractions.size
    reports = []
    for j in range(Y.shape[1]):
        y_test = Y[test, j]
        try:
            r2 = np.array([r_squared(y_test, preds[:, i, j]) for i in range(f)])
        except UndefinedScoreError as exc:
            reports.append(
                TargetReport(j, np.full(f, np.nan), np.nan, np.nan, np.nan,
                             flagged=True, flag_reason=str(exc))
            )
            continue
        best = int(np.argmax(r2))  # first max = smallest fraction on ties
        reports.append(
            TargetReport(
                target_index=j,
                r2_by_fraction=r2,
                best_fraction=float(fit.fractions[best]),
                best_r2=float(r2[best]),
                best_alpha=float(fit.resolved_alphas[best, j]),
            )
        )
    return CvReport(
        fractions=fit.fractions,
        train_indices=train,
        test_indices=test,
        per_target=tuple(reports),
    )
