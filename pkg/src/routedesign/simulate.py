"""Desk-scale replication study of design-based route-cost estimation.

One synthetic city is drawn per configuration: uniform points in a
rectangle, true edge costs equal to pairwise Euclidean distances. Each
replication perturbs those costs, observes only route totals under a fixed
experimental design, re-estimates the edge costs three ways (prior mean
alone, cross-validated ridge, Gaussian posterior), routes with cheap
heuristics on each estimate, and scores every route against the perturbed
ground truth of that replication (congestion included, measurement noise
not, since the latter is observation error rather than road state).

Two perturbation scenarios are available. Scenario "a" adds a Gaussian
congestion surcharge to the short edges only (those strictly below the 25th
percentile of the clean costs). Scenario "b" adds to every edge a
heavy-tailed draw whose location is the reciprocal of the clean cost, so
the prior ranking of edges is roughly inverted and prior-led routing is
badly misled. Both end with white observation noise on every edge.
"""

from __future__ import annotations

import concurrent.futures
import threading
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

from .circuits import circuit_cost, edge_count, edge_pairs
from .criteria import Design, PriorSpec, model_matrix
from .errors import ConfigError, NumericError
from .estimation import ObservationSet, posterior_mean, ridge_cv
from .heuristics import (
    arbitrary_insertion_route,
    best_nearest_neighbor_route,
    two_opt_improve,
)
from .search import SearchConfig, random_design, simulated_annealing_search

METHODS = ("prior", "frequentist", "bayes")
HEURISTICS = ("nn", "arb", "2opt")


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything that defines one replication study."""

    m: int = 20
    scenario: str = "a"
    n_values: tuple[int, ...] = (49, 96, 191, 381)
    replications: int = 100
    base_seed: int = 0
    tau: float = 0.1
    white_noise_sd: float = 0.1
    congestion_mean: float = 0.5
    congestion_sd: float = 0.25
    heavy_tail_df: float = 3.0
    design_iters: int = 10000
    cv_folds: int = 10
    region: tuple[float, float] = (1.0, 1.0)

    def __post_init__(self):
        if self.scenario not in ("a", "b"):
            raise ConfigError(f"scenario must be 'a' or 'b', got {self.scenario!r}")
        if self.m < 4:
            raise ConfigError(f"m must be >= 4, got {self.m}")
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")
        if any(n < 1 for n in self.n_values) or not self.n_values:
            raise ConfigError("n_values must be a nonempty tuple of sizes >= 1")
        if self.tau <= 0:
            raise ConfigError("tau must be > 0")
        if min(self.white_noise_sd, self.congestion_sd) < 0:
            raise ConfigError("noise standard deviations must be >= 0")
        if self.heavy_tail_df <= 0:
            raise ConfigError("heavy_tail_df must be > 0")


@dataclass(frozen=True, eq=False)
class ReplicationResult:
    rep: int
    method: str
    heuristic: str
    n: int
    scenario: str
    true_cost: float  # NaN when estimation failed for this cell


def generate_instance(m: int, seed, region=(1.0, 1.0)):
    """Uniform points in a region and their pairwise distances as edge costs."""
    rng = np.random.default_rng(seed)
    points = rng.random((m, 2)) * np.asarray(region, dtype=float)
    return points, pdist(points)


def _congest_a(beta_star, rng, mean, sd):
    # surcharge on the short edges only: strictly below the 25th percentile
    threshold = np.percentile(beta_star, 25)
    congested = beta_star.copy()
    short = beta_star < threshold
    congested[short] += rng.normal(mean, sd, int(short.sum()))
    return congested


def _noncentral_t(delta, df, rng):
    # location (Z + delta) / sqrt(V / df), Z ~ N(0,1), V ~ chi2(df)
    z = rng.standard_normal(delta.shape[0])
    v = rng.chisquare(df, delta.shape[0])
    return (z + delta) / np.sqrt(v / df)


def _congest_b(beta_star, rng, df):
    bad = np.flatnonzero(beta_star <= 0)
    if bad.size:
        j, k = edge_pairs(_m_from_p(beta_star.shape[0]))[int(bad[0])]
        raise ValueError(f"edge ({j}, {k}) has nonpositive clean cost; "
                         "scenario b needs strictly positive costs")
    return beta_star + _noncentral_t(1.0 / beta_star, df, rng)


def _m_from_p(p: int) -> int:
    m = int(round((1 + np.sqrt(1 + 8 * p)) / 2))
    if edge_count(m) != p:
        raise ValueError(f"{p} is not a valid edge count")
    return m


def _scenario_pair(cfg: ScenarioConfig, beta_star, rng):
    """(congested truth, fully perturbed costs) for one replication."""
    if cfg.scenario == "a":
        congested = _congest_a(beta_star, rng, cfg.congestion_mean, cfg.congestion_sd)
    else:
        congested = _congest_b(beta_star, rng, cfg.heavy_tail_df)
    perturbed = congested + rng.normal(0.0, cfg.white_noise_sd, beta_star.shape[0])
    return congested, perturbed


def noise_scenario_a(beta_star, seed, mean=0.5, sd=0.25, white_sd=0.1):
    """Perturbed edge costs: congestion on short edges, then white noise."""
    beta_star = np.asarray(beta_star, dtype=float)
    rng = np.random.default_rng(seed)
    congested = _congest_a(beta_star, rng, mean, sd)
    return congested + rng.normal(0.0, white_sd, beta_star.shape[0])


def noise_scenario_b(beta_star, seed, df=3.0, white_sd=0.1):
    """Perturbed edge costs: heavy-tailed inversion of the clean ranking."""
    beta_star = np.asarray(beta_star, dtype=float)
    rng = np.random.default_rng(seed)
    congested = _congest_b(beta_star, rng, df)
    return congested + rng.normal(0.0, white_sd, beta_star.shape[0])


def simulate_observations(design: Design, costs) -> ObservationSet:
    """Route totals for each design row under the given edge costs."""
    y = model_matrix(design) @ np.asarray(costs, dtype=float)
    return ObservationSet(design, y)


@dataclass(eq=False)
class ExperimentContext:
    """Instance, prior, and per-n designs shared by all replications."""

    cfg: ScenarioConfig
    points: np.ndarray
    beta_star: np.ndarray
    prior: PriorSpec
    designs: dict
    matrices: dict
    insertion_seed: int


_context_cache: dict = {}
_context_lock = threading.Lock()


def build_context(cfg: ScenarioConfig) -> ExperimentContext:
    """Draw the instance and search one design per requested size.

    Deterministic in cfg.base_seed; independent substreams cover the
    instance (tag 0), each design search (tag 1, n), and the insertion
    order used by every replication's insertion heuristic (tag 2).
    """
    points, beta_star = generate_instance(
        cfg.m, np.random.SeedSequence((cfg.base_seed, 0)), cfg.region)
    prior = PriorSpec(beta_star, np.full(edge_count(cfg.m), cfg.tau ** 2))
    designs = {}
    matrices = {}
    for n in cfg.n_values:
        rng = np.random.default_rng(np.random.SeedSequence((cfg.base_seed, 1, n)))
        start = random_design(cfg.m, n, rng)
        sc = SearchConfig(max_iter=cfg.design_iters, restarts=1)
        d = simulated_annealing_search(start, prior, sc, rng)
        designs[n] = d
        matrices[n] = model_matrix(d)
    seed = int(np.random.SeedSequence((cfg.base_seed, 2)).generate_state(1)[0])
    return ExperimentContext(cfg, points, beta_star, prior, designs, matrices, seed)


def get_context(cfg: ScenarioConfig) -> ExperimentContext:
    with _context_lock:
        ctx = _context_cache.get(cfg)
        if ctx is None:
            ctx = build_context(cfg)
            _context_cache[cfg] = ctx
        return ctx


def _estimates(cfg, ctx, obs, rng):
    out = {"prior": ctx.beta_star}
    try:
        out["frequentist"] = ridge_cv(obs, folds=cfg.cv_folds, seed=rng).coef
    except NumericError:
        out["frequentist"] = None
    try:
        out["bayes"] = posterior_mean(obs, ctx.prior).beta_hat
    except NumericError:
        out["bayes"] = None
    return out


def run_replication(cfg: ScenarioConfig, n: int, rep: int,
                    context: ExperimentContext | None = None):
    """One replication at design size n: 9 scored (method, heuristic) cells."""
    ctx = context or get_context(cfg)
    if n not in ctx.designs:
        raise ConfigError(f"n={n} is not among the configured sizes {cfg.n_values}")
    rng = np.random.default_rng(np.random.SeedSequence((cfg.base_seed, 3, rep)))
    congested, perturbed = _scenario_pair(cfg, ctx.beta_star, rng)
    obs = ObservationSet(ctx.designs[n], ctx.matrices[n] @ perturbed)
    estimates = _estimates(cfg, ctx, obs, rng)
    results = []
    for method in METHODS:
        beta_est = estimates[method]
        routes = {}
        if beta_est is not None:
            nn = best_nearest_neighbor_route(beta_est, cfg.m)
            routes["nn"] = nn
            routes["arb"] = arbitrary_insertion_route(
                beta_est, cfg.m, ctx.insertion_seed)
            routes["2opt"] = two_opt_improve(nn, beta_est)
        for heuristic in HEURISTICS:
            cost = (circuit_cost(routes[heuristic], congested)
                    if heuristic in routes else float("nan"))
            results.append(ReplicationResult(rep, method, heuristic, n,
                                             cfg.scenario, cost))
    return results


def run_experiment(cfg: ScenarioConfig, threads: int = 1):
    """All replications at every configured size, in deterministic order."""
    ctx = get_context(cfg)
    jobs = [(n, rep) for n in cfg.n_values for rep in range(cfg.replications)]

    def one(job):
        n, rep = job
        return run_replication(cfg, n, rep, ctx)

    if threads <= 1:
        nested = [one(j) for j in jobs]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            nested = list(pool.map(one, jobs))
    return [r for chunk in nested for r in chunk]


def summarize(results) -> dict:
    """Median and quartiles of true route cost per (scenario, n, method, heuristic)."""
    cells = {}
    for r in results:
        cells.setdefault((r.scenario, r.n, r.method, r.heuristic), []).append(
            r.true_cost)
    out = []
    for (scenario, n, method, heuristic), vals in sorted(cells.items()):
        arr = np.asarray(vals)
        ok = arr[np.isfinite(arr)]
        entry = {"scenario": scenario, "n": n, "method": method,
                 "heuristic": heuristic, "reps": int(ok.size)}
        if ok.size:
            q1, med, q3 = np.percentile(ok, [25, 50, 75])
            entry.update(median=float(med), q1=float(q1), q3=float(q3))
        else:
            entry.update(median=None, q1=None, q3=None)
        out.append(entry)
    return {"cells": out}


def median_true_costs(results) -> dict:
    """(n, method, heuristic) -> median true cost, missing cells skipped."""
    out = {}
    for cell in summarize(results)["cells"]:
        if cell["median"] is not None:
            out[(cell["n"], cell["method"], cell["heuristic"])] = cell["median"]
    return out


# search-quality benchmark grid: n = k * C(m,2) + 1 for k = 1, 2, 3
BENCHMARK_M = (6, 8, 10)


def benchmark_sizes(m: int) -> tuple[int, ...]:
    p = edge_count(m)
    return (p + 1, 2 * p + 1, 3 * p + 1)


def median_search_efficiency(m: int, n: int, algorithm: str, trials: int,
                             config=None, threads: int = 1) -> float:
    """Median relative efficiency of repeated best-of-restarts searches.

    The prior is the benchmark default, precision 0.01 on every edge.
    """
    from .search import efficiency_trials

    effs = efficiency_trials(m, n, algorithm, trials, config, threads=threads)
    return float(np.median(effs))
