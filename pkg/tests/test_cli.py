import json

import numpy as np
import pytest

from routedesign import circuit_cost, generate_instance
from routedesign.cli import main
from routedesign.fileio import (
    read_design,
    read_results,
    write_costs,
    write_design,
    write_observations,
    write_prior,
)
from routedesign import Design, PriorSpec, enumerate_circuits, simulate_observations


def run(*argv):
    return main(list(argv))


def test_construct_writes_expanded_design(tmp_path, capsys):
    out = tmp_path / "design.txt"
    assert run("construct", "--m", "6", "--out", str(out)) == 0
    d = read_design(out)
    assert (d.m, d.n) == (6, 30)


def test_construct_stdout_default(capsys):
    assert run("construct", "--m", "5") == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 6
    assert lines[0].split()[0] == "1"


def test_construct_from_file(tmp_path):
    base = tmp_path / "base.txt"
    assert run("construct", "--m", "5", "--out", str(base)) == 0
    out = tmp_path / "bigger.txt"
    assert run("construct", "--m", "7", "--from", str(base),
               "--out", str(out)) == 0
    assert read_design(out).n == 180


def test_eval_reports_criterion_and_efficiency(tmp_path, capsys):
    design = tmp_path / "design.txt"
    run("construct", "--m", "5", "--out", str(design))
    assert run("eval", "--design", str(design)) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == {"log_det", "rel_efficiency"}
    assert doc["rel_efficiency"] == pytest.approx(1.0, abs=1e-9)


def test_eval_with_prior_file(tmp_path, capsys):
    design = tmp_path / "design.txt"
    run("construct", "--m", "4", "--out", str(design))
    prior = tmp_path / "prior.json"
    write_prior(prior, PriorSpec.isotropic(4, 0.5), 4)
    assert run("eval", "--design", str(design), "--prior", str(prior)) == 0
    assert json.loads(capsys.readouterr().out)["rel_efficiency"] <= 1.0 + 1e-12


def test_search_deterministic_output_bytes(tmp_path):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    for path in (a, b):
        assert run("search", "--algo", "bubble", "--m", "5", "--n", "8",
                   "--iters", "50", "--restarts", "2", "--seed", "3",
                   "--out", str(path)) == 0
    assert a.read_bytes() == b.read_bytes()
    assert read_design(a).n == 8


def test_search_anneal_runs(tmp_path):
    out = tmp_path / "d.txt"
    assert run("search", "--algo", "anneal", "--m", "6", "--n", "12",
               "--iters", "200", "--restarts", "1", "--out", str(out)) == 0
    assert read_design(out).n == 12


def test_estimate_bayes_prior_only_roundtrip(tmp_path, capsys):
    d = Design(4, enumerate_circuits(4))
    _, beta = generate_instance(4, 0)
    obs = tmp_path / "obs.csv"
    write_observations(obs, simulate_observations(d, beta))
    assert run("estimate", "--obs", str(obs), "--method", "bayes") == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["beta_hat"]) == 6
    assert "lambda" not in doc


def test_estimate_ridge_reports_lambda(tmp_path, capsys):
    d = Design(4, enumerate_circuits(4))
    _, beta = generate_instance(4, 1)
    obs = tmp_path / "obs.csv"
    write_observations(obs, simulate_observations(d, beta))
    assert run("estimate", "--obs", str(obs), "--method", "ridge",
               "--penalty", "0.5") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["lambda"] == 0.5
    assert len(doc["beta_hat"]) == 6


def test_estimate_ridge_cv_needs_enough_rows(tmp_path):
    d = Design(4, enumerate_circuits(4))
    _, beta = generate_instance(4, 2)
    obs = tmp_path / "obs.csv"
    write_observations(obs, simulate_observations(d, beta))
    assert run("estimate", "--obs", str(obs), "--method", "ridge",
               "--folds", "10") == 2  # 3 rows < 10 folds


def test_estimate_singular_ridge_is_numeric_failure(tmp_path):
    d = Design(4, enumerate_circuits(4))
    _, beta = generate_instance(4, 3)
    obs = tmp_path / "obs.csv"
    write_observations(obs, simulate_observations(d, beta))
    assert run("estimate", "--obs", str(obs), "--method", "ridge",
               "--penalty", "0") == 3


def test_route_all_algorithms(tmp_path, capsys):
    costs = tmp_path / "beta.json"
    _, beta = generate_instance(6, 4)
    write_costs(costs, beta, 6)
    routes = {}
    for algo in ("nn", "arb", "2opt", "exact"):
        out = tmp_path / f"{algo}.txt"
        assert run("route", "--algo", algo, "--beta", str(costs),
                   "--out", str(out)) == 0
        routes[algo] = read_design(out).circuits[0]
        err = capsys.readouterr().err
        assert "cost=" in err
    opt_cost = circuit_cost(routes["exact"], beta)
    for algo in ("nn", "arb", "2opt"):
        assert circuit_cost(routes[algo], beta) >= opt_cost - 1e-9


def test_route_nn_starts_all_beats_plain(tmp_path):
    costs = tmp_path / "beta.json"
    _, beta = generate_instance(7, 9)
    write_costs(costs, beta, 7)
    plain = tmp_path / "plain.txt"
    best = tmp_path / "best.txt"
    assert run("route", "--algo", "nn", "--beta", str(costs),
               "--out", str(plain)) == 0
    assert run("route", "--algo", "nn", "--starts", "all", "--beta",
               str(costs), "--out", str(best)) == 0
    c_plain = circuit_cost(read_design(plain).circuits[0], beta)
    c_best = circuit_cost(read_design(best).circuits[0], beta)
    assert c_best <= c_plain + 1e-12


def test_route_forced_first_stop(tmp_path):
    costs = tmp_path / "beta.json"
    write_costs(costs, np.array([1.0, 10.0, 10.0, 1.0, 10.0, 1.0]), 4)
    out = tmp_path / "r.txt"
    assert run("route", "--algo", "nn", "--beta", str(costs),
               "--first", "3", "--out", str(out)) == 0
    assert read_design(out).circuits[0].vertices == (1, 2, 3, 4)


def test_simulate_tiny_run_deterministic(tmp_path):
    out1 = tmp_path / "r1.csv"
    out2 = tmp_path / "r2.csv"
    summary = tmp_path / "s.json"
    args = ("simulate", "--scenario", "a", "--m", "7", "--n", "22",
            "--reps", "3", "--iters", "200", "--folds", "5",
            "--threads", "2")
    assert run(*args, "--out", str(out1), "--summary", str(summary)) == 0
    assert run(*args, "--out", str(out2)) == 0
    assert out1.read_bytes() == out2.read_bytes()
    rows = read_results(out1)
    assert len(rows) == 27
    doc = json.loads(summary.read_text())
    assert doc["m"] == 7
    assert len(doc["cells"]) == 9


def test_table2_single_cell(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert run("table2", "--m", "6", "--n", "16", "--algo", "bubble",
               "--trials", "5", "--iters", "100", "--restarts", "2",
               "--threads", "1", "--out", str(out)) == 0
    printed = capsys.readouterr().out
    assert "m=6 n=16 algo=bubble trials=5" in printed
    lines = out.read_text().splitlines()
    assert lines[0] == "m,n,algorithm,trials,median_efficiency"
    assert len(lines) == 2
    med = float(lines[1].split(",")[-1])
    assert 0.0 < med <= 1.0


def test_config_file_supplies_defaults_flags_win(tmp_path, capsys):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"m": 5, "out": None}))
    assert run("construct", "--config", str(cfgfile)) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 6
    # explicit flag beats the file value
    assert run("construct", "--config", str(cfgfile), "--m", "6") == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 30


def test_config_file_rejects_unknown_keys(tmp_path):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"m": 5, "bogus": 1}))
    assert run("construct", "--config", str(cfgfile)) == 2


def test_invalid_inputs_exit_2(tmp_path):
    assert run("construct", "--m", "3") == 2
    assert run("eval", "--design", str(tmp_path / "missing.txt")) == 2
    assert run("nonsense") == 2
    assert run("search", "--algo", "bogus", "--m", "5", "--n", "5") == 2


def test_help_exits_zero(capsys):
    assert run("--help") == 0
    assert "construct" in capsys.readouterr().out
