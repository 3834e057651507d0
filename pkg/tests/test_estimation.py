import numpy as np
import pytest

from routedesign import (
    ConfigError,
    Design,
    NumericError,
    ObservationSet,
    PriorSpec,
    design_from_sequences,
    enumerate_circuits,
    posterior_mean,
    posterior_predict,
    ridge_cv,
    ridge_fit,
    ridge_solve,
)
from routedesign.criteria import model_matrix
from routedesign.estimation import default_penalty_grid


def _full_design(m):
    return Design(m, tuple(enumerate_circuits(m)))


def _observe(design, beta, noise=None):
    y = model_matrix(design) @ beta
    if noise is not None:
        y = y + noise
    return ObservationSet(design, y)


def test_empty_observation_set_returns_prior_mean_exactly():
    mu = np.array([0.3, 1.1, 0.7, 2.0, 0.5, 1.4])
    prior = PriorSpec(mu, np.full(6, 0.25))
    est = posterior_mean(ObservationSet(Design(4, ()), np.zeros(0)), prior)
    assert np.array_equal(est.beta_hat, mu)
    assert np.array_equal(est.scatter, np.diag(np.full(6, 4.0)))


def test_noise_free_probe_predictions_match():
    # coefficients are not identified (rank-deficient X), predictions are
    d = _full_design(4)
    rng = np.random.default_rng(42)
    beta_star = rng.uniform(0.5, 2.0, size=6)
    obs = _observe(d, beta_star)
    prior = PriorSpec(np.zeros(6), np.full(6, 1e-8))
    est = posterior_mean(obs, prior)
    for c, yi in zip(d.circuits, obs.y):
        assert posterior_predict(c, est) == pytest.approx(yi, abs=1e-6)


def test_prior_pull_dominates_for_large_precision():
    d = _full_design(4)
    obs = _observe(d, np.ones(6) * 3.0)
    mu = np.linspace(0.5, 3.0, 6)
    for c in (1e4, 1e6, 1e8):
        est = posterior_mean(obs, PriorSpec(mu, np.full(6, c)))
        err = np.max(np.abs(est.beta_hat - mu))
        assert err < 200.0 / c


def test_posterior_residual_identity():
    d = _full_design(5)
    rng = np.random.default_rng(7)
    obs = _observe(d, rng.uniform(0.2, 1.5, size=10),
                   noise=rng.normal(0, 0.1, size=12))
    prior = PriorSpec(rng.uniform(0.5, 1.5, size=10), np.full(10, 0.01))
    est = posterior_mean(obs, prior)
    x = model_matrix(d)
    lhs = (x.T @ x + np.diag(prior.r_diag)) @ est.beta_hat
    rhs = x.T @ obs.y + prior.r_diag * prior.mu
    assert np.max(np.abs(lhs - rhs)) < 1e-8


def test_posterior_scatter_is_symmetric_positive_definite():
    d = _full_design(5)
    obs = _observe(d, np.ones(10))
    est = posterior_mean(obs, PriorSpec.isotropic(5, 0.01))
    s = est.scatter
    assert np.max(np.abs(s - s.T)) < 1e-10
    assert np.all(np.linalg.eigvalsh(s) > 0)


def test_posterior_predict_trivial_cases():
    c = _full_design(4).circuits[0]
    zero = posterior_mean(ObservationSet(Design(4, ()), np.zeros(0)),
                          PriorSpec(np.zeros(6), np.ones(6)))
    assert posterior_predict(c, zero) == 0.0
    mu = np.arange(1.0, 7.0)
    prior_only = posterior_mean(ObservationSet(Design(4, ()), np.zeros(0)),
                                PriorSpec(mu, np.ones(6)))
    from routedesign import circuit_cost
    assert posterior_predict(c, prior_only) == pytest.approx(
        circuit_cost(c, mu))


def test_observation_set_rejects_bad_y():
    d = _full_design(4)
    with pytest.raises(ValueError, match="3 rows"):
        ObservationSet(d, np.ones(5))
    with pytest.raises(ValueError, match=r"y\[1\]"):
        ObservationSet(d, np.array([1.0, np.nan, 2.0]))


def test_posterior_rejects_mismatched_prior():
    d = _full_design(4)
    obs = _observe(d, np.ones(6))
    with pytest.raises(ValueError, match="10 edges"):
        posterior_mean(obs, PriorSpec.isotropic(5, 0.01))


def test_ridge_penalty_dominant_limit():
    d = _full_design(5)
    rng = np.random.default_rng(3)
    obs = _observe(d, rng.uniform(0.5, 2.0, size=10))
    fit = ridge_fit(obs, 1e10)
    assert np.max(np.abs(fit.coef)) < 1e-6
    assert fit.intercept == pytest.approx(float(np.mean(obs.y)), abs=1e-6)


def test_ridge_zero_penalty_is_ordinary_least_squares():
    # full-column-rank synthetic fixture, not a circuit matrix
    rng = np.random.default_rng(11)
    x = rng.normal(size=(30, 4))
    beta = np.array([1.5, -2.0, 0.5, 3.0])
    y = 2.0 + x @ beta + rng.normal(0, 0.01, size=30)
    fit = ridge_solve(x, y, 0.0)
    ones = np.column_stack([np.ones(30), x])
    coef_ls, *_ = np.linalg.lstsq(ones, y, rcond=None)
    assert fit.intercept == pytest.approx(coef_ls[0], abs=1e-8)
    assert np.max(np.abs(fit.coef - coef_ls[1:])) < 1e-8


def test_ridge_noise_free_roundtrip_m6():
    rng = np.random.default_rng(19)
    circuits = enumerate_circuits(6)
    pick = rng.choice(len(circuits), size=40, replace=False)
    d = Design(6, tuple(circuits[i] for i in pick))
    beta_star = rng.uniform(0.5, 2.0, size=15)
    obs = _observe(d, beta_star)
    fit = ridge_fit(obs, 1e-6)
    pred = fit.predict(model_matrix(d))
    assert np.max(np.abs(pred - obs.y)) < 1e-4


def test_ridge_zero_penalty_singular_names_remedy():
    d = _full_design(4)
    obs = _observe(d, np.ones(6))
    with pytest.raises(NumericError, match="positive penalty"):
        ridge_fit(obs, 0.0)


def test_ridge_rejects_negative_penalty():
    d = _full_design(4)
    with pytest.raises(ConfigError, match=">= 0"):
        ridge_fit(_observe(d, np.ones(6)), -1.0)


def test_ridge_bayes_bridge():
    # no intercept, centered data: ridge(c) == posterior with mu=0, R=cI
    d = _full_design(5)
    rng = np.random.default_rng(23)
    y = rng.normal(size=12)
    x = model_matrix(d)
    yc = y - y.mean()
    for c in (0.1, 1.0, 10.0):
        fit = ridge_solve(x, yc, c, fit_intercept=False)
        prior = PriorSpec(np.zeros(10), np.full(10, c))
        est = posterior_mean(ObservationSet(d, yc), prior)
        assert np.max(np.abs(fit.coef - est.beta_hat)) < 1e-8


def test_ridge_cv_grid_of_one():
    d = _full_design(5)
    rng = np.random.default_rng(5)
    obs = _observe(d, rng.uniform(0.5, 2.0, size=10))
    fit = ridge_cv(obs, folds=3, grid=np.array([0.7]))
    assert fit.penalty == 0.7


def test_ridge_cv_pure_noise_prefers_max_penalty():
    # grid top sits at the shrinkage knee, not deep in the flat tail
    circuits = enumerate_circuits(5)
    grid = np.geomspace(1e-3, 10.0, 13)
    hits = 0
    for s in range(100):
        rng = np.random.default_rng(s)
        pick = rng.choice(12, size=60, replace=True)
        d = Design(5, tuple(circuits[i] for i in pick))
        obs = ObservationSet(d, rng.normal(size=60))
        fit = ridge_cv(obs, folds=10, grid=grid, seed=s)
        hits += fit.penalty == grid[-1]
    assert hits >= 80


def test_ridge_cv_strong_signal_prefers_small_penalty():
    rng0 = np.random.default_rng(31)
    circuits = enumerate_circuits(5)
    grid = np.geomspace(1e-3, 1e3, 13)
    median = np.median(grid)
    hits = 0
    for s in range(100):
        rng = np.random.default_rng(1000 + s)
        pick = rng.choice(12, size=10, replace=True)
        d = Design(5, tuple(circuits[i] for i in pick))
        beta = rng.uniform(1.0, 5.0, size=10)
        obs = _observe(d, beta, noise=rng.normal(0, 1e-3, size=10))
        fit = ridge_cv(obs, folds=5, grid=grid, seed=s)
        hits += fit.penalty < median
    assert hits >= 80


def test_ridge_cv_fold_bounds():
    d = _full_design(4)
    obs = _observe(d, np.ones(6))
    with pytest.raises(ConfigError, match="folds"):
        ridge_cv(obs, folds=1)
    with pytest.raises(ConfigError, match="folds"):
        ridge_cv(obs, folds=4)


def test_ridge_cv_rejects_bad_grid():
    d = _full_design(4)
    obs = _observe(d, np.ones(6))
    with pytest.raises(ConfigError, match="grid"):
        ridge_cv(obs, folds=2, grid=np.array([]))
    with pytest.raises(ConfigError, match="grid"):
        ridge_cv(obs, folds=2, grid=np.array([-1.0, 1.0]))


def test_ridge_cv_deterministic_per_seed():
    d = _full_design(5)
    rng = np.random.default_rng(13)
    obs = _observe(d, rng.uniform(0.5, 2.0, size=10),
                   noise=rng.normal(0, 0.2, size=12))
    a = ridge_cv(obs, folds=4, seed=99)
    b = ridge_cv(obs, folds=4, seed=99)
    assert a.penalty == b.penalty
    assert np.array_equal(a.coef, b.coef)


def test_default_penalty_grid_shape_and_scale():
    g = default_penalty_grid(50, 190)
    assert g.shape == (100,)
    assert g[0] == pytest.approx(1e-4 * 190 / 50)
    assert g[-1] == pytest.approx(1e2 * 190 / 50)
    assert np.all(np.diff(g) > 0)


def test_bayes_weak_prior_approaches_small_ridge_predictions():
    # tau -> 0 (R -> 0) versus ridge lambda -> 0 on predicted totals
    d = _full_design(5)
    rng = np.random.default_rng(17)
    beta_star = rng.uniform(0.5, 2.0, size=10)
    y = model_matrix(d) @ beta_star
    yc = y - y.mean()
    obs = ObservationSet(d, yc)
    est = posterior_mean(obs, PriorSpec(np.zeros(10), np.full(10, 1e-10)))
    fit = ridge_solve(model_matrix(d), yc, 1e-10, fit_intercept=False)
    x = model_matrix(d)
    assert np.max(np.abs(x @ est.beta_hat - x @ fit.coef)) < 1e-6
