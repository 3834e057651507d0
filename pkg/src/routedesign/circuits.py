"""Canonical Hamiltonian circuits on the complete graph, and their edge encoding.

A circuit on vertices 1..m is stored in a canonical form that fixes one
representative per equivalence class under rotation and direction reversal:
the sequence starts at vertex 1 and its second entry is smaller than its
last. Undirected edges (j, k), j < k, are numbered lexicographically from 0,
which is the coordinate system used by every cost vector in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from .errors import SizeLimitError

# enumerate_circuits materialises (m-1)!/2 objects; past m=10 that is no
# longer a list you want in memory.
ENUMERATION_LIMIT = 10


def edge_count(m: int) -> int:
    """Number of undirected edges of the complete graph on m vertices."""
    return m * (m - 1) // 2


def edge_index(j: int, k: int, m: int) -> int:
    """Lexicographic index of undirected edge {j, k} among all C(m, 2) edges.

    Vertices are 1-based; the index counts (1,2), (1,3), ..., (m-1,m) from 0.
    """
    if not (1 <= j <= m and 1 <= k <= m):
        raise ValueError(f"edge endpoints must lie in 1..{m}, got ({j}, {k})")
    if j == k:
        raise ValueError(f"({j}, {k}) is not an edge: endpoints coincide")
    if j > k:
        j, k = k, j
    return (j - 1) * m - j * (j - 1) // 2 + (k - j - 1)


@lru_cache(maxsize=None)
def edge_pairs(m: int) -> tuple[tuple[int, int], ...]:
    """All undirected edges (j, k), j < k, in index order."""
    return tuple((j, k) for j in range(1, m + 1) for k in range(j + 1, m + 1))


@lru_cache(maxsize=None)
def edge_table(m: int) -> np.ndarray:
    """(m+1, m+1) lookup table mapping vertex pair to edge index, -1 on the diagonal.

    Row and column 0 are unused padding so vertices index directly.
    """
    t = np.full((m + 1, m + 1), -1, dtype=np.int64)
    for i, (j, k) in enumerate(edge_pairs(m)):
        t[j, k] = i
        t[k, j] = i
    return t


@dataclass(frozen=True, order=True)
class Circuit:
    """A Hamiltonian circuit in canonical form.

    Construct via :func:`canonicalize`; building one directly with a
    non-canonical vertex order raises.
    """

    vertices: tuple[int, ...]

    def __post_init__(self):
        v = self.vertices
        _check_permutation(v)
        if v[0] != 1 or v[1] > v[-1]:
            raise ValueError(
                f"{v} is not canonical (must start at 1 with second entry "
                "smaller than last); use canonicalize()"
            )

    @property
    def m(self) -> int:
        return len(self.vertices)

    def edges(self) -> tuple[tuple[int, int], ...]:
        """The m undirected edges traversed, each as (smaller, larger)."""
        v = self.vertices
        out = []
        for a, b in zip(v, v[1:] + v[:1]):
            out.append((a, b) if a < b else (b, a))
        return tuple(out)

    def __str__(self):
        return " ".join(str(v) for v in self.vertices)


def _check_permutation(seq: Sequence[int]) -> None:
    m = len(seq)
    if m < 3:
        raise ValueError(f"a circuit needs at least 3 vertices, got {m}")
    seen = set()
    for v in seq:
        if v in seen:
            raise ValueError(f"vertex {v} appears more than once")
        seen.add(v)
    for v in range(1, m + 1):
        if v not in seen:
            raise ValueError(f"vertex {v} is missing from {tuple(seq)}")
    # seen == {1..m} now: same size, all required members present


def canonicalize(seq: Iterable[int]) -> Circuit:
    """Canonical representative of the circuit visiting ``seq`` in order.

    Rotates the sequence to start at vertex 1, then reverses the direction
    of travel if that makes the second entry smaller than the last. Input
    must be a permutation of 1..m for some m >= 3.
    """
    v = tuple(int(x) for x in seq)
    _check_permutation(v)
    i = v.index(1)
    v = v[i:] + v[:i]
    if v[1] > v[-1]:
        v = v[:1] + v[:0:-1]
    return Circuit(v)


def enumerate_circuits(m: int) -> list[Circuit]:
    """All (m-1)!/2 canonical circuits on m vertices, lexicographically sorted."""
    if not 3 <= m <= ENUMERATION_LIMIT:
        total = math.factorial(max(m, 1) - 1) // 2
        raise SizeLimitError(
            f"enumeration over m={m} is outside 3..{ENUMERATION_LIMIT} "
            f"(would generate {total} circuits)"
        )
    out = []
    for tail in permutations(range(2, m + 1)):
        if tail[0] < tail[-1]:
            out.append(Circuit((1,) + tail))
    return out


def circuit_edge_ids(c: Circuit) -> np.ndarray:
    """Edge indices traversed by the circuit, in traversal order."""
    t = edge_table(c.m)
    v = np.asarray(c.vertices)
    return t[v, np.roll(v, -1)]


def encode(c: Circuit, m: int | None = None) -> np.ndarray:
    """0/1 indicator row over all C(m, 2) edges; exactly m entries are 1."""
    if m is not None and m != c.m:
        raise ValueError(f"circuit has {c.m} vertices, expected {m}")
    x = np.zeros(edge_count(c.m))
    x[circuit_edge_ids(c)] = 1.0
    return x


def circuit_cost(c: Circuit, beta: np.ndarray) -> float:
    """Total cost of a circuit, the sum of its m edge costs."""
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (edge_count(c.m),):
        raise ValueError(
            f"cost vector has shape {beta.shape}, expected ({edge_count(c.m)},)"
        )
    return float(beta[circuit_edge_ids(c)].sum())


def cost_matrix(beta: np.ndarray, m: int) -> np.ndarray:
    """(m+1, m+1) symmetric cost lookup with zero diagonal, 1-based vertices."""
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (edge_count(m),):
        raise ValueError(f"cost vector has shape {beta.shape}, expected ({edge_count(m)},)")
    c = np.zeros((m + 1, m + 1))
    for i, (j, k) in enumerate(edge_pairs(m)):
        c[j, k] = c[k, j] = beta[i]
    return c
