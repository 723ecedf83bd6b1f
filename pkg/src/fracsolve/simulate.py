"""Synthetic regression problem generators.

Designs start as standard-normal draws, optionally get pairwise predictor
correlation induced by repeatedly replacing one random predictor with the sum
of itself and another plus fresh noise, and are z-scored per column.  Targets
are linear responses from standard-normal ground-truth coefficients plus
Gaussian noise, either with a fixed scale or matched per target to the
noiseless signal's standard deviation.

All draws come from Philox (counter-based, portable) generators keyed on the
spec seed, so generation is reproducible and independent across the design
and target stages.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

NOISE_MODES = ("unit", "match_signal_sd")

_DESIGN_STREAM = 0
_TARGET_STREAM = 1


@dataclass(frozen=True)
class SimulationSpec:
    """Problem dimensions and noise model for one synthetic dataset.

    ``correlation_rounds`` of None means the default of ``2 * n_predictors``.
    ``noise_scale`` multiplies the noise draw in either mode; 0 gives
    noiseless targets.
    """

    n_points: int
    n_predictors: int
    n_targets: int = 1
    noise_mode: str = "unit"
    noise_scale: float = 1.0
    correlation_rounds: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.n_points < 1 or self.n_predictors < 1 or self.n_targets < 1:
            raise InvalidInputError("all dimensions must be at least 1")
        if self.noise_mode not in NOISE_MODES:
            raise InvalidInputError(f"unknown noise mode {self.noise_mode!r}")
        if self.noise_scale < 0:
            raise InvalidInputError("noise scale must be non-negative")
        if self.correlation_rounds is not None and self.correlation_rounds < 0:
            raise InvalidInputError("correlation rounds must be non-negative")
        if self.rounds > 0 and self.n_predictors < 2:
            raise InvalidInputError("correlating predictors requires at least 2 columns")

    @property
    def rounds(self) -> int:
        if self.correlation_rounds is None:
            return 2 * self.n_predictors
        return self.correlation_rounds


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, stream])))


def simulate_design(spec: SimulationSpec) -> np.ndarray:
    """Correlated, column-z-scored design matrix for the given spec.

    Correlation rounds update columns in place sequentially: each round picks
    two distinct predictors uniformly at random and sets the first to their
    sum plus standard-normal noise.  Final z-scoring (population std) makes
    the working scale immaterial.
    """
    if spec.n_points < 2:
        raise InvalidInputError("z-scoring columns requires at least 2 points")
    rng = _rng(spec.seed, _DESIGN_STREAM)
    X = rng.standard_normal((spec.n_points, spec.n_predictors))
    for _ in range(spec.rounds):
        i, j = rng.choice(spec.n_predictors, size=2, replace=False)
        X[:, i] = X[:, i] + X[:, j] + rng.standard_normal(spec.n_points)
    X -= X.mean(axis=0)
    X /= X.std(axis=0)
    return X


def simulate_targets(X, spec: SimulationSpec):
    """Ground-truth coefficients and noisy responses for a design.

    Returns ``(Y, beta_true)`` with ``Y = X @ beta_true + eps``.  In
    ``unit`` mode the noise is ``noise_scale * N(0, 1)``; in
    ``match_signal_sd`` mode each target's noise standard deviation equals
    the population standard deviation of its noiseless signal (SNR of one at
    the default scale).
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or not np.all(np.isfinite(X)):
        raise InvalidInputError("design must be a finite 2-D array")
    d = X.shape[0]
    rng = _rng(spec.seed, _TARGET_STREAM)
    beta_true = rng.standard_normal((X.shape[1], spec.n_targets))
    signal = X @ beta_true
    noise = rng.standard_normal((d, spec.n_targets))
    if spec.noise_mode == "match_signal_sd":
        noise = noise * signal.std(axis=0)
    Y = signal + spec.noise_scale * noise
    return Y, beta_true
