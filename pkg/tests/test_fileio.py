import numpy as np
import pytest

from routedesign import (
    Circuit,
    ConfigError,
    Design,
    ObservationSet,
    PriorSpec,
    enumerate_circuits,
    generate_instance,
)
from routedesign.fileio import (
    read_costs,
    read_design,
    read_observations,
    read_prior,
    read_results,
    write_costs,
    write_design,
    write_observations,
    write_prior,
    write_results,
    write_route,
    write_summary,
)
from routedesign.simulate import ReplicationResult


def test_design_roundtrip(tmp_path):
    d = Design(5, enumerate_circuits(5))
    path = tmp_path / "design.txt"
    write_design(path, d)
    assert read_design(path) == d


def test_design_read_canonicalizes(tmp_path):
    path = tmp_path / "design.txt"
    path.write_text("3 2 1 4\n\n1 2 3 4\n")
    d = read_design(path)
    assert d.circuits[0].vertices == (1, 2, 3, 4)
    assert d.n == 2


def test_design_read_errors_carry_location(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1 2 x 4\n")
    with pytest.raises(ConfigError, match="bad.txt:1"):
        read_design(path)
    path.write_text("1 2 3 4\n1 2 3\n")
    with pytest.raises(ConfigError, match="line 2"):
        read_design(path)
    path.write_text("\n")
    with pytest.raises(ConfigError, match="no circuits"):
        read_design(path)
    path.write_text("1 2 2 4\n")
    with pytest.raises(ConfigError, match="vertex"):
        read_design(path)


def test_prior_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    prior = PriorSpec(rng.uniform(0.5, 2.0, 10), rng.uniform(0.01, 1.0, 10))
    path = tmp_path / "prior.json"
    write_prior(path, prior, 5)
    m, back = read_prior(path)
    assert m == 5
    assert np.allclose(back.mu, prior.mu)
    assert np.allclose(back.r_diag, prior.r_diag)


def test_prior_scalars_broadcast(tmp_path):
    path = tmp_path / "prior.json"
    path.write_text('{"m": 4, "mu": 1.5, "r_diag": 0.01}\n')
    m, prior = read_prior(path)
    assert m == 4
    assert np.array_equal(prior.mu, np.full(6, 1.5))
    assert np.array_equal(prior.r_diag, np.full(6, 0.01))


def test_prior_errors(tmp_path):
    path = tmp_path / "prior.json"
    path.write_text('{"m": 4, "mu": 1.0}\n')
    with pytest.raises(ConfigError, match="r_diag"):
        read_prior(path)
    path.write_text('{"m": 4, "mu": [1, 2], "r_diag": 0.01}\n')
    with pytest.raises(ConfigError, match="length-6"):
        read_prior(path)
    path.write_text('{"m": 4, "mu": 1.0, "r_diag": -1.0}\n')
    with pytest.raises(ConfigError, match="positive"):
        read_prior(path)
    with pytest.raises(ValueError, match="m=5"):
        write_prior(path, PriorSpec.isotropic(4, 0.01), 5)


def test_observations_roundtrip(tmp_path):
    d = Design(4, enumerate_circuits(4))
    _, beta = generate_instance(4, 1)
    from routedesign import simulate_observations
    obs = simulate_observations(d, beta)
    path = tmp_path / "obs.csv"
    write_observations(path, obs)
    back = read_observations(path)
    assert back.design == d
    assert np.array_equal(back.y, obs.y)  # repr() writes exact doubles


def test_observations_errors(tmp_path):
    path = tmp_path / "obs.csv"
    path.write_text("")
    with pytest.raises(ConfigError, match="empty"):
        read_observations(path)
    path.write_text("v1,v2,v3,v4\n")
    with pytest.raises(ConfigError, match="header"):
        read_observations(path)
    path.write_text("v1,v2,v3,v4,y\n1,2,3,4\n")
    with pytest.raises(ConfigError, match="obs.csv:2"):
        read_observations(path)
    path.write_text("v1,v2,v3,v4,y\n1,2,3,4,oops\n")
    with pytest.raises(ConfigError, match="obs.csv:2"):
        read_observations(path)


def test_results_roundtrip_with_missing_cell(tmp_path):
    rows = [
        ReplicationResult(0, "prior", "nn", 22, "a", 12.25),
        ReplicationResult(0, "bayes", "arb", 22, "a", float("nan")),
    ]
    path = tmp_path / "results.csv"
    write_results(path, rows)
    text = path.read_text()
    assert text.splitlines()[0] == "rep,method,heuristic,n,scenario,true_cost"
    assert text.splitlines()[2].endswith(",")  # empty cost field
    back = read_results(path)
    assert back[0].true_cost == 12.25
    assert np.isnan(back[1].true_cost)
    assert back[1].method == "bayes"


def test_write_results_uses_plain_newlines(tmp_path):
    path = tmp_path / "results.csv"
    write_results(path, [ReplicationResult(0, "prior", "nn", 5, "a", 1.0)])
    assert b"\r" not in path.read_bytes()


def test_summary_is_sorted_json(tmp_path):
    path = tmp_path / "summary.json"
    write_summary(path, {"b": 1, "a": 2})
    assert path.read_text() == '{\n  "a": 2,\n  "b": 1\n}\n'


def test_costs_roundtrip_and_errors(tmp_path):
    path = tmp_path / "beta.json"
    _, beta = generate_instance(6, 2)
    write_costs(path, beta, 6)
    m, back = read_costs(path)
    assert m == 6
    assert np.array_equal(back, beta)
    path.write_text('{"m": 4, "beta": [1, 2, 3]}\n')
    with pytest.raises(ConfigError, match="length 6"):
        read_costs(path)
    path.write_text('{"m": 4}\n')
    with pytest.raises(ConfigError, match="beta"):
        read_costs(path)
    with pytest.raises(ValueError, match="expected"):
        write_costs(path, beta, 5)


def test_route_file_reads_back_as_design(tmp_path):
    path = tmp_path / "route.txt"
    write_route(path, Circuit((1, 3, 2, 4)))
    d = read_design(path)
    assert d.n == 1
    assert d.circuits[0].vertices == (1, 3, 2, 4)
