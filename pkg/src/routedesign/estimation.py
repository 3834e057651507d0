"""Edge-cost estimation from observed route totals.

Only circuit totals are ever observed, one number per executed route, so the
regression is y = X b + noise with X the 0/1 design model matrix. Two
estimators are provided: the conjugate Gaussian posterior mean

    b = (X'X + R)^{-1} (X'y + R mu),

which stays well defined for any n (including n = 0, where it returns the
prior mean), and penalised least squares with an unpenalised intercept,
with the penalty weight chosen by cross-validation when not given.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, eigh

from .circuits import Circuit, circuit_cost
from .criteria import Design, PriorSpec, model_matrix
from .errors import ConfigError, NumericError


@dataclass(frozen=True, eq=False)
class ObservationSet:
    """Route totals y aligned with the rows of a design."""

    design: Design
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        if self.y.shape != (self.design.n,):
            raise ValueError(
                f"y has shape {self.y.shape} but the design has {self.design.n} rows"
            )
        if not np.all(np.isfinite(self.y)):
            bad = int(np.flatnonzero(~np.isfinite(self.y))[0])
            raise ValueError(f"y[{bad}] is not finite")

    @property
    def n(self) -> int:
        return self.design.n


@dataclass(frozen=True, eq=False)
class PosteriorEstimate:
    """Posterior mean of the edge costs and its unscaled scatter matrix."""

    beta_hat: np.ndarray
    scatter: np.ndarray

    def predict(self, c: Circuit) -> float:
        return circuit_cost(c, self.beta_hat)


def posterior_mean(obs: ObservationSet, prior: PriorSpec) -> PosteriorEstimate:
    """Conjugate update of a Gaussian prior with diagonal precision."""
    if prior.p != obs.design.p:
        raise ValueError(
            f"prior is over {prior.p} edges but the design has {obs.design.p}"
        )
    if obs.n == 0:
        # no data: the posterior is the prior, exactly
        return PosteriorEstimate(prior.mu.copy(), np.diag(1.0 / prior.r_diag))
    x = model_matrix(obs.design)
    a = x.T @ x + np.diag(prior.r_diag)
    rhs = x.T @ obs.y + prior.r_diag * prior.mu
    try:
        factor = cho_factor(a, lower=True, check_finite=False)
    except LinAlgError as e:
        raise NumericError(f"posterior system is not positive definite: {e}") from e
    beta = cho_solve(factor, rhs, check_finite=False)
    scatter = cho_solve(factor, np.eye(prior.p), check_finite=False)
    return PosteriorEstimate(beta, scatter)


def posterior_predict(c: Circuit, estimate: PosteriorEstimate) -> float:
    """Predicted total for one circuit under the posterior mean."""
    return estimate.predict(c)


@dataclass(frozen=True, eq=False)
class RidgeFit:
    """Penalised least-squares coefficients, with the chosen penalty weight."""

    coef: np.ndarray
    intercept: float
    penalty: float

    def predict(self, x: np.ndarray) -> np.ndarray:
        return self.intercept + np.asarray(x, dtype=float) @ self.coef


def ridge_solve(x: np.ndarray, y: np.ndarray, penalty: float,
                fit_intercept: bool = True) -> RidgeFit:
    """Minimise ||y - b0 - X b||^2 + penalty * ||b||^2, b0 unpenalised.

    penalty = 0 is ordinary least squares and requires X (after centering,
    if an intercept is fit) to have full column rank.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if penalty < 0:
        raise ConfigError(f"penalty must be >= 0, got {penalty}")
    if fit_intercept:
        x_mean = x.mean(axis=0)
        y_mean = y.mean()
        xc = x - x_mean
        yc = y - y_mean
    else:
        x_mean = np.zeros(x.shape[1])
        y_mean = 0.0
        xc, yc = x, y
    a = xc.T @ xc + penalty * np.eye(x.shape[1])
    try:
        factor = cho_factor(a, lower=True, check_finite=False)
    except LinAlgError as e:
        raise NumericError(
            f"normal equations are singular at penalty={penalty}; "
            f"use a strictly positive penalty ({e})"
        ) from e
    coef = cho_solve(factor, xc.T @ yc, check_finite=False)
    intercept = float(y_mean - x_mean @ coef) if fit_intercept else 0.0
    return RidgeFit(coef, intercept, float(penalty))


def ridge_fit(obs: ObservationSet, penalty: float,
              fit_intercept: bool = True) -> RidgeFit:
    """Penalised fit of edge costs to observed route totals."""
    return ridge_solve(model_matrix(obs.design), obs.y, penalty, fit_intercept)


def default_penalty_grid(n: int, p: int, size: int = 100) -> np.ndarray:
    """Log-spaced penalty candidates, scaled by the p/n aspect ratio."""
    return np.geomspace(1e-4, 1e2, size) * (p / max(n, 1))


def ridge_cv(obs: ObservationSet, folds: int = 10,
             grid: np.ndarray | None = None, seed=0) -> RidgeFit:
    """Cross-validated choice of the penalty weight, then a full-data refit.

    Rows are shuffled once with the given seed and dealt into ``folds``
    contiguous blocks. The penalty with the smallest mean held-out squared
    error wins; ties keep the smallest penalty on the grid.
    """
    x = model_matrix(obs.design)
    y = obs.y
    n, p = x.shape
    if not 2 <= folds <= n:
        raise ConfigError(f"folds must lie in 2..{n}, got {folds}")
    if grid is None:
        grid = default_penalty_grid(n, p)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or np.any(grid < 0):
        raise ConfigError("penalty grid must be a nonempty 1-d array of values >= 0")

    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    blocks = np.array_split(perm, folds)
    sse = np.zeros(grid.size)
    for held in blocks:
        mask = np.ones(n, dtype=bool)
        mask[held] = False
        xt, yt = x[mask], y[mask]
        xv, yv = x[held], y[held]
        x_mean = xt.mean(axis=0)
        y_mean = yt.mean()
        xc = xt - x_mean
        # one eigendecomposition per fold covers the whole penalty grid
        w, v = eigh(xc.T @ xc)
        g = v.T @ (xc.T @ (yt - y_mean))
        xvc = (xv - x_mean) @ v
        for i, lam in enumerate(grid):
            denom = w + lam
            scale = np.where(denom > 1e-12, 1.0 / np.maximum(denom, 1e-12), 0.0)
            pred = y_mean + xvc @ (g * scale)
            sse[i] += float(np.sum((yv - pred) ** 2))
    best = int(np.argmin(sse))  # argmin keeps the first, i.e. smallest, penalty
    fit = ridge_solve(x, y, float(grid[best]))
    return RidgeFit(fit.coef, fit.intercept, float(grid[best]))
