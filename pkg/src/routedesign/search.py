"""Heuristic searches for high-criterion designs of a fixed size.

Two local searches over adjacent-transposition moves are provided: a greedy
bubble-sort style descent and simulated annealing. Both leave vertex 1
pinned in place, since rotating a circuit does not change it. Restarting
from several random designs and keeping the best result is the intended
usage, wrapped by :func:`multi_start`.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .circuits import canonicalize, edge_count, edge_table
from .criteria import Design, PriorSpec, bayes_d_criterion, relative_d_efficiency
from .errors import ConfigError


@dataclass(frozen=True)
class SearchConfig:
    """Knobs shared by both searches.

    max_iter caps annealing moves, or full sweeps for the greedy descent
    (which normally converges long before the cap). cooling scales the
    annealing temperature; larger values keep the walk hot for longer.
    """

    max_iter: int = 10000
    restarts: int = 10
    seed: int = 0
    cooling: float = 1.0

    def __post_init__(self):
        if self.max_iter < 1:
            raise ConfigError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.restarts < 1:
            raise ConfigError(f"restarts must be >= 1, got {self.restarts}")
        if self.cooling <= 0:
            raise ConfigError(f"cooling must be > 0, got {self.cooling}")


def random_design(m: int, n: int, rng) -> Design:
    """n independent uniformly random circuits on m vertices."""
    rng = np.random.default_rng(rng)
    rows = []
    for _ in range(n):
        tail = rng.permutation(np.arange(2, m + 1))
        rows.append(canonicalize((1,) + tuple(int(v) for v in tail)))
    return Design(m, tuple(rows))


def _check_search_args(design: Design, prior: PriorSpec) -> None:
    if design.m < 4:
        raise ConfigError(f"searches need m >= 4, got m={design.m}")
    if design.n < 1:
        raise ConfigError("searches need at least one design row")
    if prior.p != design.p:
        raise ValueError(
            f"prior is over {prior.p} edges but the design has {design.p}"
        )


def _rows_array(design: Design) -> np.ndarray:
    return np.asarray([c.vertices for c in design.circuits], dtype=np.int64)


def _design_from_rows(m: int, rows: np.ndarray) -> Design:
    return Design(m, tuple(canonicalize(r) for r in rows))


def bubble_sort_search(design: Design, prior: PriorSpec,
                       config: SearchConfig | None = None) -> Design:
    """Greedy local improvement from the given design.

    Scans each row's adjacent swaps until none improves, revisits rows until
    a full sweep accepts nothing. The criterion never decreases.
    """
    config = config or SearchConfig()
    _check_search_args(design, prior)
    rows = _rows_array(design)
    _kernels.bubble_search(rows, edge_table(design.m), prior.r_diag,
                           config.max_iter)
    return _design_from_rows(design.m, rows)


def simulated_annealing_search(design: Design, prior: PriorSpec,
                               config: SearchConfig | None = None,
                               rng=None) -> Design:
    """Annealed random walk from the given design; returns the best state seen.

    Worsening moves are accepted with a probability that shrinks as the
    iteration count grows. All randomness comes from ``rng`` (or a fresh
    generator seeded from the config), drawn up front.
    """
    config = config or SearchConfig()
    _check_search_args(design, prior)
    rng = np.random.default_rng(config.seed if rng is None else rng)
    rows = _rows_array(design)
    niter = config.max_iter
    u01 = rng.random(niter)
    move_row = rng.integers(0, design.n, niter, dtype=np.int64)
    move_pos = rng.integers(1, design.m - 1, niter, dtype=np.int64)
    best_rows, _, _ = _kernels.anneal_search(
        rows, edge_table(design.m), prior.r_diag, config.cooling,
        u01, move_row, move_pos)
    return _design_from_rows(design.m, best_rows)


_ALGORITHMS = ("bubble", "anneal")


def multi_start(m: int, n: int, prior: PriorSpec, algorithm: str = "bubble",
                config: SearchConfig | None = None) -> Design:
    """Best design over config.restarts independent runs.

    Restart r seeds its own generator with config.seed + r, so a run is
    reproducible in isolation. Ties keep the earliest restart.
    """
    config = config or SearchConfig()
    if algorithm not in _ALGORITHMS:
        raise ConfigError(f"unknown algorithm {algorithm!r}, expected one of {_ALGORITHMS}")
    if edge_count(m) != prior.p:
        raise ValueError(f"prior is over {prior.p} edges but m={m} implies {edge_count(m)}")
    best = None
    best_val = -np.inf
    for r in range(config.restarts):
        rng = np.random.default_rng(config.seed + r)
        start = random_design(m, n, rng)
        if algorithm == "bubble":
            d = bubble_sort_search(start, prior, config)
        else:
            d = simulated_annealing_search(start, prior, config, rng)
        val = bayes_d_criterion(d, prior)
        if val > best_val:
            best, best_val = d, val
    return best


def efficiency_trials(m: int, n: int, algorithm: str, trials: int,
                      config: SearchConfig | None = None,
                      prior: PriorSpec | None = None,
                      threads: int = 1) -> np.ndarray:
    """Relative efficiency reached by repeated multi-start runs.

    Trial t shifts the seed by t * config.restarts so no two restarts any
    where in the batch share a seed. Results are ordered by trial, and do
    not depend on the thread count.
    """
    config = config or SearchConfig()
    if prior is None:
        prior = PriorSpec.isotropic(m, 0.01)

    def one(t: int) -> float:
        cfg = replace(config, seed=config.seed + t * config.restarts)
        best = multi_start(m, n, prior, algorithm, cfg)
        return relative_d_efficiency(best, prior)

    if threads <= 1:
        return np.asarray([one(t) for t in trials_range(trials)])
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        return np.asarray(list(pool.map(one, trials_range(trials))))


def trials_range(trials: int) -> range:
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    return range(trials)
