"""Command-line surface.

Subcommands map one-to-one onto the library: construct, search, eval,
estimate, route, simulate, and the search-quality benchmark table2. Exit
code 0 on success, 2 for invalid configuration or arguments, 3 for numeric
failure. Flags beat values from an optional JSON --config file, which beat
the built-in defaults shown by --help.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import fileio
from .construct import construct_design
from .criteria import PriorSpec, bayes_d_criterion, relative_d_efficiency
from .errors import ConfigError, NumericError, SizeLimitError
from .estimation import posterior_mean, ridge_cv, ridge_fit
from .heuristics import (
    arbitrary_insertion_route,
    best_nearest_neighbor_route,
    brute_force_route,
    nearest_neighbor_route,
    two_opt_improve,
)
from .search import SearchConfig, multi_start
from .simulate import (
    BENCHMARK_M,
    ScenarioConfig,
    benchmark_sizes,
    median_search_efficiency,
    run_experiment,
    summarize,
)

DEFAULT_PRECISION = 0.01  # isotropic prior when no --prior file is given


def _build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        prog="routedesign",
        description="Design, estimate, and route over Hamiltonian circuits.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", default=None,
                       help="JSON file of defaults; explicit flags win")

    p = sub.add_parser("construct", formatter_class=fmt,
                       help="expand a base design to m vertices")
    common(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--from", dest="from_file", default=None,
                   help="design file to expand instead of the built-in base")
    p.add_argument("--out", default=None, help="design file (default stdout)")

    p = sub.add_parser("search", formatter_class=fmt,
                       help="multi-start heuristic design search")
    common(p)
    p.add_argument("--algo", choices=("bubble", "anneal"), default="bubble")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--iters", type=int, default=10000)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cooling", type=float, default=1.0)
    p.add_argument("--prior", default=None,
                   help=f"prior JSON (default: mean 0, precision {DEFAULT_PRECISION})")
    p.add_argument("--out", default=None, help="design file (default stdout)")

    p = sub.add_parser("eval", formatter_class=fmt,
                       help="score a design file against a prior")
    common(p)
    p.add_argument("--design", required=True)
    p.add_argument("--prior", default=None)
    p.add_argument("--out", default=None, help="JSON output (default stdout)")

    p = sub.add_parser("estimate", formatter_class=fmt,
                       help="estimate edge costs from observed route totals")
    common(p)
    p.add_argument("--obs", required=True, help="observations CSV (v1..vm,y)")
    p.add_argument("--method", choices=("bayes", "ridge"), default="bayes")
    p.add_argument("--prior", default=None,
                   help="prior JSON for --method bayes")
    p.add_argument("--penalty", type=float, default=None,
                   help="fixed ridge penalty; omit to cross-validate")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="JSON output (default stdout)")

    p = sub.add_parser("route", formatter_class=fmt,
                       help="extract a low-cost route from edge costs")
    common(p)
    p.add_argument("--algo", choices=("nn", "arb", "2opt", "exact"),
                   required=True)
    p.add_argument("--beta", required=True, help='costs JSON {"m":..,"beta":[..]}')
    p.add_argument("--starts", choices=("all",), default=None,
                   help="nn only: try every first stop, keep the best")
    p.add_argument("--first", type=int, default=None,
                   help="nn only: force the first stop")
    p.add_argument("--seed", type=int, default=0, help="arb insertion order seed")
    p.add_argument("--out", default=None, help="route file (default stdout)")

    p = sub.add_parser("simulate", formatter_class=fmt,
                       help="replication study of estimation + routing")
    common(p)
    p.add_argument("--scenario", choices=("a", "b"), default="a")
    p.add_argument("--m", type=int, default=20)
    p.add_argument("--n", type=int, nargs="+", default=[49, 96],
                   help="design sizes to run")
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=10000,
                   help="annealing iterations for the one-off design build")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--tau", type=float, default=0.1,
                   help="prior scale; precision matrix is tau^2 I")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--out", required=True, help="results CSV")
    p.add_argument("--summary", default=None, help="summary JSON of medians/quartiles")

    p = sub.add_parser("table2", formatter_class=fmt,
                       help="median search efficiency over the benchmark grid")
    common(p)
    p.add_argument("--m", type=int, default=None,
                   help=f"one of {BENCHMARK_M} (default: all)")
    p.add_argument("--n", type=int, default=None,
                   help="single design size (default: the three per m)")
    p.add_argument("--algo", choices=("bubble", "anneal"), default=None,
                   help="default: both")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--iters", type=int, default=10000)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cooling", type=float, default=1.0)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--out", default=None, help="CSV of per-cell medians")
    return parser


def _default_threads() -> int:
    import os

    return max(1, os.cpu_count() or 1)


def _apply_config(parser, argv):
    """Fold --config file values in under explicit flags: flags > file > defaults."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv[1:] if argv else [])
    if not known.config:
        return parser.parse_args(argv)
    try:
        with open(known.config) as f:
            overrides = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {known.config}: {e}") from e
    if not isinstance(overrides, dict):
        raise ConfigError(f"{known.config}: config must be a JSON object")
    sub = None
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction) and argv:
            sub = action.choices.get(argv[0])
    if sub is None:
        return parser.parse_args(argv)
    dests = {a.dest for a in sub._actions}
    unknown = set(overrides) - dests
    if unknown:
        raise ConfigError(
            f"{known.config}: unknown keys for {argv[0]}: {sorted(unknown)}")
    converted = {}
    for key, val in overrides.items():
        converted[key] = tuple(val) if isinstance(val, list) else val
    sub.set_defaults(**converted)
    for action in sub._actions:
        if action.dest in converted:
            action.required = False
    return parser.parse_args(argv)


def _out_text(path, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as f:
            f.write(text)


def _load_prior(path, m: int) -> PriorSpec:
    if path is None:
        return PriorSpec.isotropic(m, DEFAULT_PRECISION)
    pm, prior = fileio.read_prior(path)
    if pm != m:
        raise ConfigError(f"prior file is for m={pm}, expected m={m}")
    return prior


def _cmd_construct(args) -> int:
    start = fileio.read_design(args.from_file) if args.from_file else None
    d = construct_design(args.m, start)
    _out_text(args.out, "".join(str(c) + "\n" for c in d.circuits))
    return 0


def _cmd_search(args) -> int:
    prior = _load_prior(args.prior, args.m)
    cfg = SearchConfig(max_iter=args.iters, restarts=args.restarts,
                       seed=args.seed, cooling=args.cooling)
    d = multi_start(args.m, args.n, prior, args.algo, cfg)
    _out_text(args.out, "".join(str(c) + "\n" for c in d.circuits))
    print(f"log_det={bayes_d_criterion(d, prior)!r} "
          f"rel_efficiency={relative_d_efficiency(d, prior)!r}",
          file=sys.stderr)
    return 0


def _cmd_eval(args) -> int:
    d = fileio.read_design(args.design)
    prior = _load_prior(args.prior, d.m)
    doc = {"log_det": bayes_d_criterion(d, prior),
           "rel_efficiency": relative_d_efficiency(d, prior)}
    _out_text(args.out, json.dumps(doc, indent=2) + "\n")
    return 0


def _cmd_estimate(args) -> int:
    obs = fileio.read_observations(args.obs)
    if args.method == "bayes":
        prior = _load_prior(args.prior, obs.design.m)
        est = posterior_mean(obs, prior)
        doc = {"beta_hat": est.beta_hat.tolist()}
    else:
        if args.penalty is not None:
            fit = ridge_fit(obs, args.penalty)
        else:
            fit = ridge_cv(obs, folds=args.folds, seed=args.seed)
        doc = {"beta_hat": fit.coef.tolist(), "lambda": fit.penalty}
    _out_text(args.out, json.dumps(doc, indent=2) + "\n")
    return 0


def _cmd_route(args) -> int:
    m, beta = fileio.read_costs(args.beta)
    if args.algo == "nn":
        if args.starts == "all":
            c = best_nearest_neighbor_route(beta, m)
        else:
            c = nearest_neighbor_route(beta, m, args.first)
    elif args.algo == "arb":
        c = arbitrary_insertion_route(beta, m, args.seed)
    elif args.algo == "2opt":
        c = two_opt_improve(best_nearest_neighbor_route(beta, m), beta)
    else:
        c = brute_force_route(beta, m)
    _out_text(args.out, str(c) + "\n")
    from .circuits import circuit_cost

    print(f"cost={circuit_cost(c, beta)!r}", file=sys.stderr)
    return 0


def _cmd_simulate(args) -> int:
    cfg = ScenarioConfig(m=args.m, scenario=args.scenario,
                         n_values=tuple(args.n), replications=args.reps,
                         base_seed=args.seed, design_iters=args.iters,
                         cv_folds=args.folds, tau=args.tau)
    results = run_experiment(cfg, threads=args.threads)
    fileio.write_results(args.out, results)
    if args.summary:
        doc = summarize(results)
        doc.update(m=cfg.m, scenario=cfg.scenario, replications=cfg.replications)
        fileio.write_summary(args.summary, doc)
    return 0


def _cmd_table2(args) -> int:
    ms = (args.m,) if args.m is not None else BENCHMARK_M
    algos = (args.algo,) if args.algo else ("anneal", "bubble")
    cfg = SearchConfig(max_iter=args.iters, restarts=args.restarts,
                       seed=args.seed, cooling=args.cooling)
    rows = []
    for m in ms:
        sizes = (args.n,) if args.n is not None else benchmark_sizes(m)
        for n in sizes:
            for algo in algos:
                med = median_search_efficiency(m, n, algo, args.trials, cfg,
                                               threads=args.threads)
                rows.append((m, n, algo, args.trials, med))
                print(f"m={m} n={n} algo={algo} trials={args.trials} "
                      f"median_efficiency={med:.4f}")
    if args.out:
        with open(args.out, "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["m", "n", "algorithm", "trials", "median_efficiency"])
            for row in rows:
                w.writerow([*row[:4], repr(row[4])])
    return 0


_COMMANDS = {
    "construct": _cmd_construct,
    "search": _cmd_search,
    "eval": _cmd_eval,
    "estimate": _cmd_estimate,
    "route": _cmd_route,
    "simulate": _cmd_simulate,
    "table2": _cmd_table2,
}


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    try:
        args = _apply_config(parser, list(argv))
    except SystemExit as e:
        return int(e.code or 0)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, SizeLimitError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except NumericError as e:
        print(f"numeric error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
