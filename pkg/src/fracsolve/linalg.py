"""Design-matrix decomposition and coefficient rotation.

The solvers in this package all work in the rotated coordinate system
obtained from the singular value decomposition of the design matrix
``X = U S V^T``: targets are rotated once (``ytilde = U^T y``), per-component
shrinkage happens on the rotated coefficients, and solutions are rotated back
through ``V`` at the end.  For tall problems (more rows than predictors) the
decomposition is computed from the much smaller Gram matrix ``X^T X``, whose
eigenvalues are the squared singular values of ``X``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDesignError, InvalidInputError

DEFAULT_TRUNCATION_TOL = 1e-10


def as_design_matrix(values) -> np.ndarray:
    """Validate and return a design matrix as a float64 (d, p) array.

    Raises
    ------
    InvalidInputError
        If the input is not 2-D, is empty, or contains non-finite entries.
    """
    X = np.asarray(values, dtype=np.float64)
    if X.ndim != 2:
        raise InvalidInputError(f"design matrix must be 2-D, got shape {X.shape}")
    if X.shape[0] < 1 or X.shape[1] < 1:
        raise InvalidInputError(f"design matrix must be at least 1x1, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InvalidInputError("design matrix contains non-finite entries")
    return X


def as_target_block(values, n_points: int) -> np.ndarray:
    """Validate targets and return a float64 (d, t) array.

    1-D input is treated as a single target column.  Row count must match the
    design matrix.
    """
    Y = np.asarray(values, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y[:, None]
    if Y.ndim != 2:
        raise InvalidInputError(f"targets must be 1-D or 2-D, got shape {Y.shape}")
    if Y.shape[0] != n_points:
        raise InvalidInputError(
            f"targets have {Y.shape[0]} rows but the design matrix has {n_points}"
        )
    if Y.shape[1] < 1:
        raise InvalidInputError("target block must contain at least one column")
    if not np.all(np.isfinite(Y)):
        raise InvalidInputError("targets contain non-finite entries")
    return Y


@dataclass(frozen=True)
class RotatedProblem:
    """SVD factors of a design matrix plus the rotated targets.

    Attributes
    ----------
    singular_values : (r,) array, descending and strictly positive.
    right_basis : (p, r) array with orthonormal columns (the retained part of V).
    rotated_targets : (r, t) array, ``U^T Y`` restricted to retained components.
    effective_rank : number of singular values kept after truncation.
    truncation_tolerance : relative cutoff used (values below tol * max dropped).
    """

    singular_values: np.ndarray
    right_basis: np.ndarray
    rotated_targets: np.ndarray
    effective_rank: int
    truncation_tolerance: float

    @property
    def n_predictors(self) -> int:
        return self.right_basis.shape[0]

    @property
    def n_targets(self) -> int:
        return self.rotated_targets.shape[1]


def decompose_design(X, Y, tol: float = DEFAULT_TRUNCATION_TOL) -> RotatedProblem:
    """Decompose a design matrix and rotate the targets into its left basis.

    Uses a direct thin SVD when d <= p and the Gram-matrix eigendecomposition
    when d > p (the p-by-p eigenproblem needs far less memory than the full
    SVD for tall matrices; singular values are square roots of the Gram
    eigenvalues).  Components with singular value below ``tol`` times the
    largest are dropped, together with the matching rows of the rotated
    targets.

    Parameters
    ----------
    X : (d, p) array-like
    Y : (d, t) array-like (1-D allowed for a single target)
    tol : relative truncation threshold, in (0, 1).

    Returns
    -------
    RotatedProblem

    Raises
    ------
    InvalidInputError
        For non-finite inputs, shape mismatches, or tol outside (0, 1).
    DegenerateDesignError
        If every singular value falls below the cutoff (X is numerically zero).
    """
    X = as_design_matrix(X)
    Y = as_target_block(Y, X.shape[0])
    if not (0.0 < tol < 1.0):
        raise InvalidInputError(f"truncation tolerance must be in (0, 1), got {tol}")

    d, p = X.shape
    if d > p:
        evals, V = np.linalg.eigh(X.T @ X)
        order = np.argsort(evals)[::-1]
        svals = np.sqrt(np.clip(evals[order], 0.0, None))
        V = V[:, order]
        keep = _retained(svals, tol)
        svals = svals[keep]
        V = np.ascontiguousarray(V[:, keep])
        # U^T Y = S^-1 V^T X^T Y, computed one target at a time so that batch
        # and single-target solves see bit-identical BLAS calls.
        VtXt = np.ascontiguousarray(V.T @ X.T)
        ytilde = np.empty((svals.size, Y.shape[1]))
        for j in range(Y.shape[1]):
            col = np.ascontiguousarray(Y[:, j])
            ytilde[:, j] = (VtXt @ col) / svals
    else:
        U, svals, Vt = np.linalg.svd(X, full_matrices=False)
        keep = _retained(svals, tol)
        svals = svals[keep]
        V = np.ascontiguousarray(Vt[keep].T)
        Ut = np.ascontiguousarray(U[:, keep].T)
        ytilde = np.empty((svals.size, Y.shape[1]))
        for j in range(Y.shape[1]):
            col = np.ascontiguousarray(Y[:, j])
            ytilde[:, j] = Ut @ col

    return RotatedProblem(
        singular_values=svals,
        right_basis=V,
        rotated_targets=ytilde,
        effective_rank=svals.size,
        truncation_tolerance=tol,
    )


def _retained(svals: np.ndarray, tol: float) -> np.ndarray:
    largest = svals[0] if svals.size else 0.0
    if largest <= 0.0:
        raise DegenerateDesignError("design matrix is numerically zero")
    keep = svals >= tol * largest
    if not np.any(keep):
        raise DegenerateDesignError("all singular values fall below the truncation cutoff")
    return keep


def unrotate_coefficients(rp: RotatedProblem, beta_rotated) -> np.ndarray:
    """Map rotated coefficients back to predictor space: ``V @ beta_rotated``.

    ``beta_rotated`` must have ``effective_rank`` rows; any number of columns
    is allowed.  Column L2-norms are preserved because V has orthonormal
    columns.
    """
    B = np.asarray(beta_rotated, dtype=np.float64)
    squeeze = B.ndim == 1
    if squeeze:
        B = B[:, None]
    if B.ndim != 2 or B.shape[0] != rp.effective_rank:
        raise InvalidInputError(
            f"rotated coefficients must have {rp.effective_rank} rows, got shape {B.shape}"
        )
    out = rp.right_basis @ B
    return out[:, 0] if squeeze else out
