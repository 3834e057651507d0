"""Route construction and improvement heuristics over estimated edge costs.

All heuristics treat the highest-numbered vertex as the depot where every
route begins and ends. Costs come in as a length-C(m, 2) vector in edge
index order; routes come out as canonical circuits.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import permutations

import numpy as np

from .circuits import (
    Circuit,
    canonicalize,
    circuit_cost,
    cost_matrix,
    edge_count,
    edge_table,
)
from .errors import SizeLimitError

BRUTE_FORCE_LIMIT = 10


def nearest_neighbor_route(beta, m: int, first_vertex: int | None = None) -> Circuit:
    """Greedy route from the depot, always moving to the cheapest unvisited vertex.

    first_vertex forces the first stop (useful both for a dispatcher's
    constraint and for multi-starting); ties elsewhere go to the lowest
    vertex index.
    """
    cmat = cost_matrix(beta, m)
    route = [m]
    if first_vertex is not None:
        if not 1 <= first_vertex <= m - 1:
            raise ValueError(
                f"first_vertex must lie in 1..{m - 1}, got {first_vertex}")
        route.append(first_vertex)
    unvisited = [v for v in range(1, m + 1) if v not in route]
    while unvisited:
        here = route[-1]
        costs = cmat[here, unvisited]
        nxt = unvisited[int(np.argmin(costs))]  # first min wins: lowest index
        route.append(nxt)
        unvisited.remove(nxt)
    return canonicalize(route)


def best_nearest_neighbor_route(beta, m: int) -> Circuit:
    """Cheapest greedy route over all m-1 choices of forced first stop."""
    best = None
    best_cost = math.inf
    for fv in range(1, m):
        c = nearest_neighbor_route(beta, m, fv)
        cost = circuit_cost(c, np.asarray(beta, dtype=float))
        if cost < best_cost - 1e-15:
            best, best_cost = c, cost
    return best


def arbitrary_insertion_route(beta, m: int, seed=0) -> Circuit:
    """Insertion heuristic with a seeded random visiting order.

    Starts from the 3-cycle of the first three vertices in the order,
    then inserts each remaining vertex where it increases the tour cost
    the least (earliest position on ties).
    """
    cmat = cost_matrix(beta, m)
    rng = np.random.default_rng(seed)
    order = [int(v) for v in rng.permutation(np.arange(1, m + 1))]
    tour = order[:3]
    for u in order[3:]:
        best_pos = 0
        best_delta = math.inf
        for pos in range(len(tour)):
            a = tour[pos]
            b = tour[(pos + 1) % len(tour)]
            delta = cmat[a, u] + cmat[u, b] - cmat[a, b]
            if delta < best_delta - 1e-15:
                best_delta = delta
                best_pos = pos
        tour.insert(best_pos + 1, u)
    return canonicalize(tour)


def two_opt_improve(c: Circuit, beta, max_passes: int = 200) -> Circuit:
    """Best-improvement segment reversals until no exchange helps.

    Each pass evaluates every pair of non-adjacent tour edges, applies the
    single best strict improvement, and rescans. The cost never increases.
    """
    cmat = cost_matrix(beta, c.m)
    tour = list(c.vertices)
    m = len(tour)
    for _ in range(max_passes):
        best_delta = -1e-12
        best = None
        for i in range(m - 1):
            for j in range(i + 2, m):
                if i == 0 and j == m - 1:
                    continue  # same edge pair, reversal is a no-op
                a, b = tour[i], tour[i + 1]
                d, e = tour[j], tour[(j + 1) % m]
                delta = cmat[a, d] + cmat[b, e] - cmat[a, b] - cmat[d, e]
                if delta < best_delta:
                    best_delta = delta
                    best = (i, j)
        if best is None:
            break
        i, j = best
        tour[i + 1:j + 1] = reversed(tour[i + 1:j + 1])
    return canonicalize(tour)


@lru_cache(maxsize=4)
def _all_circuit_edge_ids(m: int):
    """(rows, edge id rows) for every canonical circuit, in lexicographic order."""
    verts = np.asarray(
        [(1,) + t for t in permutations(range(2, m + 1)) if t[0] < t[-1]],
        dtype=np.int64,
    )
    etab = edge_table(m)
    eids = etab[verts, np.roll(verts, -1, axis=1)]
    return verts, eids


def brute_force_route(beta, m: int) -> Circuit:
    """Exact cheapest circuit by full enumeration; lexicographic tie-break."""
    if not 3 <= m <= BRUTE_FORCE_LIMIT:
        raise SizeLimitError(
            f"exact routing enumerates (m-1)!/2 circuits; m={m} is outside "
            f"3..{BRUTE_FORCE_LIMIT}")
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (edge_count(m),):
        raise ValueError(f"cost vector has shape {beta.shape}, expected ({edge_count(m)},)")
    verts, eids = _all_circuit_edge_ids(m)
    totals = beta[eids].sum(axis=1)
    return Circuit(tuple(int(v) for v in verts[int(np.argmin(totals))]))


def check_metric(beta, m: int, tol: float = 1e-12) -> None:
    """Raise unless the costs are nonnegative and satisfy the triangle inequality."""
    beta = np.asarray(beta, dtype=float)
    cmat = cost_matrix(beta, m)
    if np.any(beta < -tol):
        e = int(np.flatnonzero(beta < -tol)[0])
        raise ValueError(f"edge cost {e} is negative ({beta[e]})")
    d = cmat[1:, 1:]
    gap = d[:, None, :] - d[:, :, None] - d[None, :, :]
    if np.any(gap > tol):
        i, j, k = (int(v) + 1 for v in np.argwhere(gap > tol)[0])
        raise ValueError(
            f"triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})")


def nn_worst_case_bound(m: int) -> float:
    """Guaranteed cost ratio of greedy routing to the optimum on metric costs."""
    return 0.5 * math.ceil(math.log2(m)) + 0.5


def nearest_neighbor_ratio(beta, m: int) -> float:
    """Worst greedy-to-optimal cost ratio over all forced first stops.

    Requires metric costs; the result never exceeds nn_worst_case_bound(m).
    """
    check_metric(beta, m)
    beta = np.asarray(beta, dtype=float)
    opt = circuit_cost(brute_force_route(beta, m), beta)
    worst = 0.0
    starts = [None] + list(range(1, m))
    for fv in starts:
        cost = circuit_cost(nearest_neighbor_route(beta, m, fv), beta)
        if opt == 0.0:
            ratio = 1.0 if cost == 0.0 else math.inf
        else:
            ratio = cost / opt
        worst = max(worst, ratio)
    if worst > nn_worst_case_bound(m) + 1e-9:
        raise RuntimeError(
            f"greedy ratio {worst} exceeds the metric guarantee "
            f"{nn_worst_case_bound(m)}; costs were checked as metric")
    return worst
