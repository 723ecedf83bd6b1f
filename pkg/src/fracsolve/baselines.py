"""Standard ridge regression solvers: the oracles and benchmark comparators.

``solve_ridge_naive`` does an independent pseudo-inversion per penalty value,
the textbook formulation and the expensive baseline.  ``solve_ridge_rotated``
amortizes a single decomposition across all penalty values by shrinking in
rotated space.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError
from .linalg import RotatedProblem, as_design_matrix, as_target_block


def as_alpha_list(alphas) -> np.ndarray:
    """Validate user-chosen penalty weights: finite, non-negative, non-empty."""
    a = np.atleast_1d(np.asarray(alphas, dtype=np.float64))
    if a.size < 1:
        raise InvalidInputError("at least one alpha is required")
    if not np.all(np.isfinite(a)) or np.any(a < 0):
        raise InvalidInputError("alphas must be finite and non-negative")
    return a


def solve_ridge_naive(X, Y, alphas) -> np.ndarray:
    """Ridge solutions ``pinv(X^T X + alpha I) @ X^T Y``, one inversion per alpha.

    The pseudo-inverse covers the alpha = 0 rank-deficient case with the
    minimum-norm solution.  Returns a (p, n_alphas, t) array.
    """
    X = as_design_matrix(X)
    Y = as_target_block(Y, X.shape[0])
    alphas = as_alpha_list(alphas)
    p = X.shape[1]
    G = X.T @ X
    XtY = X.T @ Y
    out = np.empty((p, alphas.size, Y.shape[1]))
    eye = np.eye(p)
    for k, alpha in enumerate(alphas):
        out[:, k, :] = np.linalg.pinv(G + alpha * eye) @ XtY
    return out


def solve_ridge_rotated(rp: RotatedProblem, alphas) -> np.ndarray:
    """Ridge solutions from one shared decomposition.

    In rotated space the solution is the scalar shrinkage
    ``s_i / (s_i^2 + alpha) * ytilde_i`` per component; results are rotated
    back through the right basis.  Returns a (p, n_alphas, t) array.
    """
    alphas = as_alpha_list(alphas)
    s = rp.singular_values
    filt = s[None, :, None] / (s[None, :, None] ** 2 + alphas[:, None, None])
    beta_rot = filt * rp.rotated_targets[None, :, :]  # (n_alphas, r, t)
    out = np.einsum("pr,art->pat", rp.right_basis, beta_rot)
    return np.ascontiguousarray(out)
