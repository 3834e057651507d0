"""Readers and writers for the on-disk formats.

Designs and routes travel as plain text, one space-separated vertex
sequence per line. Priors are JSON objects {"m", "mu", "r_diag"} where the
vectors may be given as scalars to mean "constant". Observations are CSV
with columns v1..vm for the route followed by y for its observed total.
Replication results are CSV; missing cells (failed estimation) leave the
cost field empty. All writers emit plain "\n" newlines so identical inputs
give byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
from typing import Iterable

import numpy as np

from .circuits import Circuit, canonicalize, edge_count
from .criteria import Design, PriorSpec
from .errors import ConfigError
from .estimation import ObservationSet
from .simulate import ReplicationResult


def write_design(path, design: Design) -> None:
    with open(path, "w") as f:
        for c in design.circuits:
            f.write(str(c) + "\n")


def read_design(path) -> Design:
    rows = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                seq = [int(tok) for tok in line.split()]
            except ValueError as e:
                raise ConfigError(f"{path}:{lineno}: {e}") from e
            try:
                rows.append(canonicalize(seq))
            except ValueError as e:
                raise ConfigError(f"{path}:{lineno}: {e}") from e
    if not rows:
        raise ConfigError(f"{path}: no circuits found")
    m = rows[0].m
    for lineno, c in enumerate(rows, start=1):
        if c.m != m:
            raise ConfigError(
                f"{path}: line {lineno} has {c.m} vertices, expected {m}")
    return Design(m, tuple(rows))


def write_prior(path, prior: PriorSpec, m: int) -> None:
    if edge_count(m) != prior.p:
        raise ValueError(f"prior is over {prior.p} edges but m={m} implies {edge_count(m)}")
    doc = {"m": m, "mu": prior.mu.tolist(), "r_diag": prior.r_diag.tolist()}
    with open(path, "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def read_prior(path) -> tuple[int, PriorSpec]:
    with open(path) as f:
        doc = json.load(f)
    try:
        m = int(doc["m"])
        mu = doc["mu"]
        r_diag = doc["r_diag"]
    except (KeyError, TypeError) as e:
        raise ConfigError(f"{path}: prior file needs keys m, mu, r_diag") from e
    p = edge_count(m)
    mu = np.full(p, float(mu)) if np.isscalar(mu) else np.asarray(mu, dtype=float)
    r_diag = (np.full(p, float(r_diag)) if np.isscalar(r_diag)
              else np.asarray(r_diag, dtype=float))
    if mu.shape != (p,) or r_diag.shape != (p,):
        raise ConfigError(
            f"{path}: mu and r_diag must be scalars or length-{p} lists for m={m}")
    try:
        return m, PriorSpec(mu, r_diag)
    except ValueError as e:
        raise ConfigError(f"{path}: {e}") from e


def write_observations(path, obs: ObservationSet) -> None:
    m = obs.design.m
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow([f"v{i}" for i in range(1, m + 1)] + ["y"])
        for c, y in zip(obs.design.circuits, obs.y):
            w.writerow(list(c.vertices) + [repr(float(y))])


def read_observations(path) -> ObservationSet:
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise ConfigError(f"{path}: empty observation file") from None
        if not header or header[-1] != "y" or len(header) < 4:
            raise ConfigError(
                f"{path}: expected header v1..vm,y with m >= 3 route columns")
        m = len(header) - 1
        rows, ys = [], []
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != m + 1:
                raise ConfigError(
                    f"{path}:{lineno}: expected {m + 1} fields, got {len(rec)}")
            try:
                rows.append(canonicalize(int(tok) for tok in rec[:m]))
                ys.append(float(rec[m]))
            except ValueError as e:
                raise ConfigError(f"{path}:{lineno}: {e}") from e
    design = Design(m, tuple(rows))
    try:
        return ObservationSet(design, np.asarray(ys))
    except ValueError as e:
        raise ConfigError(f"{path}: {e}") from e


RESULT_FIELDS = ("rep", "method", "heuristic", "n", "scenario", "true_cost")


def write_results(path, results: Iterable[ReplicationResult]) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(RESULT_FIELDS)
        for r in results:
            cost = "" if math.isnan(r.true_cost) else repr(float(r.true_cost))
            w.writerow([r.rep, r.method, r.heuristic, r.n, r.scenario, cost])


def read_results(path) -> list[ReplicationResult]:
    out = []
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        for rec in reader:
            cost = float(rec["true_cost"]) if rec["true_cost"] else float("nan")
            out.append(ReplicationResult(
                int(rec["rep"]), rec["method"], rec["heuristic"],
                int(rec["n"]), rec["scenario"], cost))
    return out


def write_summary(path, summary: dict) -> None:
    with open(path, "w") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
        f.write("\n")


def write_costs(path, beta, m: int) -> None:
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (edge_count(m),):
        raise ValueError(f"cost vector has shape {beta.shape}, expected ({edge_count(m)},)")
    with open(path, "w") as f:
        json.dump({"m": m, "beta": beta.tolist()}, f, indent=2)
        f.write("\n")


def read_costs(path) -> tuple[int, np.ndarray]:
    with open(path) as f:
        doc = json.load(f)
    try:
        m = int(doc["m"])
        beta = np.asarray(doc["beta"], dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"{path}: cost file needs keys m and beta") from e
    if beta.shape != (edge_count(m),):
        raise ConfigError(
            f"{path}: beta must have length {edge_count(m)} for m={m}")
    return m, beta


def write_route(path, c: Circuit) -> None:
    with open(path, "w") as f:
        f.write(str(c) + "\n")
