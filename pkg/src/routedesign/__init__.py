"""Bayesian D-optimal design, cost estimation, and routing over Hamiltonian circuits."""

from .circuits import (
    Circuit,
    canonicalize,
    circuit_cost,
    edge_count,
    edge_index,
    edge_pairs,
    encode,
    enumerate_circuits,
)
from .construct import base_design, construct_design, expand_design, exhaustive_optimal
from .criteria import (
    Design,
    PriorSpec,
    bayes_d_criterion,
    design_from_sequences,
    edge_structure_matrix,
    full_moment_matrix,
    model_matrix,
    relative_d_efficiency,
)
from .errors import ConfigError, NumericError, RouteDesignError, SizeLimitError
from .estimation import (
    ObservationSet,
    PosteriorEstimate,
    RidgeFit,
    posterior_mean,
    posterior_predict,
    ridge_cv,
    ridge_fit,
    ridge_solve,
)
from .heuristics import (
    arbitrary_insertion_route,
    best_nearest_neighbor_route,
    brute_force_route,
    check_metric,
    nearest_neighbor_ratio,
    nearest_neighbor_route,
    nn_worst_case_bound,
    two_opt_improve,
)
from .search import (
    SearchConfig,
    bubble_sort_search,
    multi_start,
    random_design,
    simulated_annealing_search,
)
from .simulate import (
    ReplicationResult,
    ScenarioConfig,
    generate_instance,
    median_search_efficiency,
    noise_scenario_a,
    noise_scenario_b,
    run_experiment,
    run_replication,
    simulate_observations,
    summarize,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
