import math

import numpy as np
import pytest

from fracsolve.baselines import solve_ridge_naive
from fracsolve.errors import InvalidInputError
from fracsolve.frr import (
    AlphaGrid,
    SolveOptions,
    as_fraction_grid,
    build_alpha_grid,
    effective_dof,
    flat_spectrum_alpha,
    gamma_curve,
    interpolate_alphas,
    ols_rotated,
    shrinkage_factors,
    solve_frr,
)
from fracsolve.linalg import decompose_design


def fraction_oracle(svals, ytilde_col, alpha):
    """Direct evaluation of the norm fraction at one alpha: scalar loops only."""
    num = 0.0
    den = 0.0
    for s, y in zip(svals, ytilde_col):
        rr = s / (s**2 + alpha) * y
        ols = y / s
        num += rr * rr
        den += ols * ols
    return math.sqrt(num / den)


# --- rotated OLS ------------------------------------------------------------

def test_ols_unit_spectrum():
    rp = decompose_design(np.eye(2), np.array([3.0, 4.0]))
    np.testing.assert_array_equal(ols_rotated(rp).ravel(), [3.0, 4.0])


def test_ols_divides_by_singular_values():
    rp = decompose_design(np.diag([2.0, 1.0]), np.array([1.0, 1.0]))
    np.testing.assert_allclose(sorted(np.abs(ols_rotated(rp).ravel())), [0.5, 1.0])


def test_ols_zero_target():
    rp = decompose_design(np.diag([2.0, 1.0]), np.zeros(2))
    np.testing.assert_array_equal(ols_rotated(rp), np.zeros((2, 1)))


# --- alpha grid -------------------------------------------------------------

def test_grid_unit_singular_value():
    grid = build_alpha_grid([1.0])
    assert grid.alphas[0] == 0.0
    ramp = grid.alphas[1:]
    assert ramp.size == 31  # (3 - (-3)) / 0.2 + 1
    np.testing.assert_allclose(ramp[0], 1e-3, rtol=1e-12)
    np.testing.assert_allclose(ramp[-1], 1e3, rtol=1e-12)


def test_grid_endpoints_from_spectrum():
    grid = build_alpha_grid([2.0, 1.0])
    ramp = grid.alphas[1:]
    np.testing.assert_allclose(ramp[0], 1e-3 * 1.0**2, rtol=1e-12)
    assert ramp[-1] >= 1e3 * 2.0**2 * (1 - 1e-12)  # covers the top endpoint


def test_grid_large_scale_no_overflow():
    grid = build_alpha_grid([1e6])
    ramp = grid.alphas[1:]
    np.testing.assert_allclose(ramp[0], 1e9, rtol=1e-9)
    assert ramp[-1] >= 1e15 * (1 - 1e-12)
    assert np.all(np.isfinite(ramp))


def test_grid_ratio_invariant():
    for svals in ([1.0], [2.0, 1.0], [17.3, 0.004], [1e6]):
        ramp = build_alpha_grid(svals).alphas[1:]
        ratios = ramp[1:] / ramp[:-1]
        np.testing.assert_allclose(ratios, 10**0.2, rtol=1e-12)


# --- shrinkage factors ------------------------------------------------------

def test_shrinkage_unregularized_and_matched():
    grid = AlphaGrid(alphas=np.array([0.0, 1.0]))
    sf = shrinkage_factors([1.0], grid)
    np.testing.assert_array_equal(sf, [[1.0, 0.5]])


def test_shrinkage_column_values():
    grid = AlphaGrid(alphas=np.array([1.0]))
    sf = shrinkage_factors([2.0, 1.0], grid)
    np.testing.assert_allclose(sf.ravel(), [0.8, 0.5])


def test_shrinkage_bounds_and_monotonicity():
    grid = build_alpha_grid([3.0, 0.5])
    sf = shrinkage_factors([3.0, 0.5], grid)
    assert np.all(sf > 0) and np.all(sf <= 1)
    np.testing.assert_array_equal(sf[:, 0], [1.0, 1.0])
    assert np.all(np.diff(sf, axis=1) < 0)


# --- fraction curve ---------------------------------------------------------

def test_gamma_is_one_without_shrinkage():
    grid = AlphaGrid(alphas=np.array([0.0, 0.5, 2.0]))
    sf = shrinkage_factors([2.0, 1.0], grid)
    gam = gamma_curve(np.array([3.0, -1.0]), sf)
    assert gam[0] == 1.0


def test_gamma_matches_direct_evaluation():
    # svals (2, 1), ytilde (1, 1): OLS = (0.5, 1), at alpha=1 the fraction is
    # sqrt((0.4^2 + 0.5^2) / 1.25) = 0.57271...
    svals = np.array([2.0, 1.0])
    ytilde = np.array([1.0, 1.0])
    expected = fraction_oracle(svals, ytilde, 1.0)
    assert abs(expected - 0.5727128425310542) < 1e-15
    grid = AlphaGrid(alphas=np.array([0.0, 1.0]))
    sf = shrinkage_factors(svals, grid)
    gam = gamma_curve(ytilde / svals, sf)
    np.testing.assert_allclose(gam[1], expected, rtol=1e-12)


def test_gamma_flat_spectrum_is_data_independent():
    # With all singular values equal, gamma = s^2 / (s^2 + alpha) regardless
    # of the target.
    s = 1.7
    grid = build_alpha_grid([s, s, s])
    sf = shrinkage_factors([s, s, s], grid)
    rng = np.random.default_rng(5)
    for _ in range(4):
        ols = rng.standard_normal(3)
        gam = gamma_curve(ols, sf)
        np.testing.assert_allclose(gam, s**2 / (s**2 + grid.alphas), rtol=1e-12)


def test_gamma_strictly_decreasing():
    rng = np.random.default_rng(2)
    svals = np.sort(rng.uniform(0.1, 5.0, size=6))[::-1]
    grid = build_alpha_grid(svals)
    sf = shrinkage_factors(svals, grid)
    gam = gamma_curve(rng.standard_normal(6), sf)
    assert np.all(np.diff(gam) < 0)


def test_gamma_zero_norm_rejected():
    grid = AlphaGrid(alphas=np.array([0.0, 1.0]))
    sf = shrinkage_factors([1.0], grid)
    with pytest.raises(InvalidInputError):
        gamma_curve(np.zeros(1), sf)


# --- interpolation ----------------------------------------------------------

def test_interpolation_endpoints():
    grid = build_alpha_grid([1.0])
    sf = shrinkage_factors([1.0], grid)
    gam = gamma_curve(np.array([2.0]), sf)
    alphas = interpolate_alphas(gam, grid, [0.0, 1.0])
    assert alphas[0] == np.inf
    assert alphas[1] == 0.0


def test_interpolation_flat_spectrum_analytic():
    # Analytic inverse on a flat spectrum: alpha = s^2 (1/gamma - 1).
    grid = build_alpha_grid([1.0])
    sf = shrinkage_factors([1.0], grid)
    gam = gamma_curve(np.array([1.0]), sf)
    requested = np.array([0.25, 0.5, 0.8])
    alphas = interpolate_alphas(gam, grid, requested)
    achieved = 1.0 / (1.0 + alphas)
    assert np.max(np.abs(achieved - requested)) <= 0.01
    assert abs(alphas[1] - flat_spectrum_alpha(1.0, 0.5)) <= 0.02


def test_interpolation_rejects_rising_curve():
    grid = AlphaGrid(alphas=np.array([0.0, 1.0, 10.0]))
    with pytest.raises(Exception):
        interpolate_alphas(np.array([1.0, 0.4, 0.6]), grid, [0.5])


# --- effective degrees of freedom -------------------------------------------

def test_dof_rank_at_zero():
    assert effective_dof([1.0, 1.0, 1.0], 0.0) == 3.0


def test_dof_spot_value():
    assert abs(effective_dof([2.0, 1.0], 1.0) - 1.3) <= 1e-12


def test_dof_full_shrinkage():
    assert effective_dof([5.0, 2.0, 0.3], np.inf) == 0.0


# --- analytic flat-spectrum alpha -------------------------------------------

def test_flat_alpha_values():
    assert flat_spectrum_alpha(1.0, 0.5) == 1.0
    assert flat_spectrum_alpha(1.0, 1.0) == 0.0
    assert flat_spectrum_alpha(3.0, 0.25) == 27.0
    assert flat_spectrum_alpha(2.0, 0.0) == math.inf
    with pytest.raises(InvalidInputError):
        flat_spectrum_alpha(1.0, 1.5)


# --- full solve -------------------------------------------------------------

def test_solve_identity_analytic():
    sol = solve_frr(np.eye(2), np.array([3.0, 4.0]), [0.5])
    np.testing.assert_allclose(sol.coefficients[:, 0, 0], [1.5, 2.0], rtol=1e-10)
    assert abs(sol.resolved_alphas[0, 0] - 1.0) <= 0.02
    assert abs(sol.achieved_fractions[0, 0] - 0.5) <= 0.01


def test_solve_full_fraction_returns_ols():
    rng = np.random.default_rng(17)
    X = rng.standard_normal((40, 6))
    Y = rng.standard_normal((40, 3))
    sol = solve_frr(X, Y, [1.0])
    ols = np.linalg.pinv(X) @ Y
    np.testing.assert_allclose(sol.coefficients[:, 0, :], ols, rtol=1e-8)
    np.testing.assert_array_equal(sol.resolved_alphas[0], np.zeros(3))


def test_solve_zero_fraction_returns_zeros():
    rng = np.random.default_rng(18)
    X = rng.standard_normal((15, 4))
    sol = solve_frr(X, rng.standard_normal(15), [0.0, 1.0])
    np.testing.assert_array_equal(sol.coefficients[:, 0, 0], np.zeros(4))
    assert sol.resolved_alphas[0, 0] == np.inf


def test_solve_matches_naive_ridge_at_resolved_alphas():
    # Oracle: an independent matrix-inversion solve at each resolved alpha.
    rng = np.random.default_rng(42)
    X = rng.standard_normal((100, 10))
    Y = rng.standard_normal((100, 5))
    fracs = np.round(np.arange(1, 21) * 0.05, 10)
    sol = solve_frr(X, Y, fracs)
    for j in range(5):
        for i, frac in enumerate(fracs):
            alpha = sol.resolved_alphas[i, j]
            if not np.isfinite(alpha):
                continue
            ref = solve_ridge_naive(X, Y[:, [j]], [alpha])[:, 0, 0]
            err = np.linalg.norm(sol.coefficients[:, i, j] - ref)
            assert err <= 1e-6 * max(np.linalg.norm(ref), 1e-30)


def test_fraction_accuracy_on_random_problems():
    rng = np.random.default_rng(0)
    fracs = np.round(np.arange(1, 21) * 0.05, 10)
    for _ in range(5):
        X = rng.standard_normal((60, 12))
        Y = rng.standard_normal((60, 8))
        sol = solve_frr(X, Y, fracs)
        err = np.abs(sol.achieved_fractions - fracs[:, None])
        assert err.max() <= 0.01


def test_resolved_alphas_non_increasing_in_fraction():
    rng = np.random.default_rng(23)
    X = rng.standard_normal((30, 8))
    Y = rng.standard_normal((30, 4))
    sol = solve_frr(X, Y, np.round(np.arange(1, 21) * 0.05, 10))
    diffs = np.diff(sol.resolved_alphas, axis=0)
    assert np.all(diffs[np.isfinite(diffs)] <= 0)


def test_shrinkage_identity_per_component():
    # Rotated coefficients must be exactly sf * rotated OLS (the scaled-OLS
    # construction), not a direct lambda/(lambda^2+alpha) evaluation, which
    # differs at the ULP level.  Rebuilding the same scaled block and
    # back-rotation reproduces the solver output bit for bit.
    rng = np.random.default_rng(29)
    X = rng.standard_normal((25, 5))
    y = rng.standard_normal(25)
    fracs = np.array([0.3, 0.7])
    sol = solve_frr(X, y, fracs)
    rp = decompose_design(X, y)
    ols = ols_rotated(rp)[:, 0]
    s2 = rp.singular_values**2
    alphas = sol.resolved_alphas[:, 0]
    sf_star = s2[:, None] / (s2[:, None] + alphas[None, :])
    expected = rp.right_basis @ (ols[:, None] * sf_star)
    np.testing.assert_array_equal(sol.coefficients[:, :, 0], expected)


def test_target_batch_equals_single_bitwise():
    rng = np.random.default_rng(31)
    X = rng.standard_normal((50, 20))
    Y = rng.standard_normal((50, 7))
    fracs = np.round(np.arange(1, 21) * 0.05, 10)
    batch = solve_frr(X, Y, fracs)
    for j in range(7):
        single = solve_frr(X, Y[:, [j]], fracs)
        np.testing.assert_array_equal(
            batch.coefficients[:, :, j], single.coefficients[:, :, 0]
        )
        np.testing.assert_array_equal(
            batch.resolved_alphas[:, j], single.resolved_alphas[:, 0]
        )
        np.testing.assert_array_equal(
            batch.achieved_fractions[:, j], single.achieved_fractions[:, 0]
        )


def test_threaded_solve_matches_serial():
    rng = np.random.default_rng(37)
    X = rng.standard_normal((40, 10))
    Y = rng.standard_normal((40, 9))
    serial = solve_frr(X, Y, options=SolveOptions(threads=1))
    threaded = solve_frr(X, Y, options=SolveOptions(threads=4))
    np.testing.assert_array_equal(serial.coefficients, threaded.coefficients)
    np.testing.assert_array_equal(serial.resolved_alphas, threaded.resolved_alphas)


def test_flat_spectrum_consistency_orthonormal_design():
    # Orthonormal columns give a flat unit spectrum, so resolved alphas must
    # track the analytic curve within the achieved-fraction tolerance.
    rng = np.random.default_rng(41)
    Q, _ = np.linalg.qr(rng.standard_normal((64, 16)))
    y = rng.standard_normal(64)
    fracs = np.round(np.arange(1, 20) * 0.05, 10)  # 0.05 .. 0.95
    sol = solve_frr(Q, y, fracs)
    for i, frac in enumerate(fracs):
        alpha = sol.resolved_alphas[i, 0]
        achieved_analytic = 1.0 / (1.0 + alpha)
        assert abs(achieved_analytic - frac) <= 0.01


def test_degenerate_target_zero_filled():
    X = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    Y = np.column_stack([np.array([0.0, 0.0, 5.0]), np.array([1.0, 2.0, 0.0])])
    sol = solve_frr(X, Y, [0.5, 1.0])
    assert sol.degenerate_targets == (0,)
    np.testing.assert_array_equal(sol.coefficients[:, :, 0], np.zeros((2, 2)))
    assert np.all(np.isnan(sol.resolved_alphas[:, 0]))
    assert np.all(np.isfinite(sol.coefficients[:, :, 1]))


def test_fraction_grid_validation():
    with pytest.raises(InvalidInputError):
        as_fraction_grid([])
    with pytest.raises(InvalidInputError):
        as_fraction_grid([0.2, 0.1])
    with pytest.raises(InvalidInputError):
        as_fraction_grid([0.5, 1.5])
    np.testing.assert_array_equal(as_fraction_grid(0.3), [0.3])
