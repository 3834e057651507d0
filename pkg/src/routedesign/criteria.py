"""Designs over circuits, and the Bayesian D-optimality criterion.

A design is an ordered multiset of n circuits on m vertices. Its model
matrix X stacks the 0/1 edge indicators of the rows, so X has shape
(n, C(m, 2)). With a diagonal prior precision R, the design is scored by

    log det(X'X + R),

and compared against the continuous benchmark that weights every circuit
equally. That benchmark's per-row moment matrix has the closed form

    M = 2/(m-1) I + 2/((m-1)(m-2)) Q,

where Q[e, f] counts 2 minus the number of shared vertices of edges e, f.
The relative efficiency (det(X'X/n + R) / det(M + R))^(1/p), p = C(m, 2),
never exceeds 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from .circuits import Circuit, edge_count, edge_pairs, encode
from .errors import NumericError


@dataclass(frozen=True)
class Design:
    """An ordered multiset of circuits, all on the same m vertices.

    May be empty; search and efficiency computations require n >= 1 but the
    posterior update is well defined with no rows at all.
    """

    m: int
    circuits: tuple[Circuit, ...]

    def __post_init__(self):
        object.__setattr__(self, "circuits", tuple(self.circuits))
        for c in self.circuits:
            if c.m != self.m:
                raise ValueError(
                    f"circuit {c} has {c.m} vertices, design expects {self.m}"
                )

    @property
    def n(self) -> int:
        return len(self.circuits)

    @property
    def p(self) -> int:
        return edge_count(self.m)


def design_from_sequences(m: int, rows: Sequence[Sequence[int]]) -> Design:
    from .circuits import canonicalize

    return Design(m, tuple(canonicalize(r) for r in rows))


@dataclass(frozen=True, eq=False)
class PriorSpec:
    """Gaussian prior on edge costs: mean mu, diagonal precision r_diag."""

    mu: np.ndarray
    r_diag: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mu", np.asarray(self.mu, dtype=float))
        object.__setattr__(self, "r_diag", np.asarray(self.r_diag, dtype=float))
        if self.mu.ndim != 1 or self.mu.shape != self.r_diag.shape:
            raise ValueError(
                f"mu and r_diag must be 1-d of equal length, got "
                f"{self.mu.shape} and {self.r_diag.shape}"
            )
        if not np.all(self.r_diag > 0):
            raise ValueError("prior precisions must all be strictly positive")

    @property
    def p(self) -> int:
        return self.mu.shape[0]

    @classmethod
    def isotropic(cls, m: int, precision: float, mu: float = 0.0) -> "PriorSpec":
        p = edge_count(m)
        return cls(np.full(p, float(mu)), np.full(p, float(precision)))


def model_matrix(design: Design) -> np.ndarray:
    """(n, p) stack of the rows' edge indicators."""
    p = design.p
    x = np.zeros((design.n, p))
    for i, c in enumerate(design.circuits):
        x[i] = encode(c)
    return x


def _check_prior(design_p: int, prior: PriorSpec) -> None:
    if prior.p != design_p:
        raise ValueError(
            f"prior is over {prior.p} edges but the design has {design_p}"
        )


def spd_logdet(a: np.ndarray) -> float:
    """log det of a symmetric positive definite matrix, via Cholesky."""
    try:
        c, _ = cho_factor(a, lower=True, check_finite=False)
    except LinAlgError as e:
        raise NumericError(f"matrix is not positive definite: {e}") from e
    return 2.0 * float(np.sum(np.log(np.diag(c))))


def bayes_d_criterion(design: Design, prior: PriorSpec) -> float:
    """log det(X'X + R) for the design's model matrix X. Larger is better."""
    _check_prior(design.p, prior)
    x = model_matrix(design)
    a = x.T @ x + np.diag(prior.r_diag)
    return spd_logdet(a)


@lru_cache(maxsize=None)
def edge_structure_matrix(m: int) -> np.ndarray:
    """(p, p) integer matrix with entries 2 - (shared vertices of the two edges)."""
    pairs = np.asarray(edge_pairs(m))
    j, k = pairs[:, 0], pairs[:, 1]
    shared = (
        (j[:, None] == j[None, :]).astype(np.int64)
        + (j[:, None] == k[None, :])
        + (k[:, None] == j[None, :])
        + (k[:, None] == k[None, :])
    )
    return 2 - shared


def full_moment_matrix(m: int) -> np.ndarray:
    """Per-row moment matrix of the equal-weight design over all circuits.

    Closed form, exact for every m >= 3; no enumeration involved.
    """
    if m < 3:
        raise ValueError(f"need m >= 3, got {m}")
    p = edge_count(m)
    q = edge_structure_matrix(m).astype(float)
    return (2.0 / (m - 1)) * np.eye(p) + (2.0 / ((m - 1) * (m - 2))) * q


def relative_d_efficiency(design: Design, prior: PriorSpec) -> float:
    """Efficiency of a design relative to the equal-weight benchmark, in (0, 1]."""
    _check_prior(design.p, prior)
    if design.n == 0:
        raise ValueError("relative efficiency needs at least one design row")
    x = model_matrix(design)
    r = np.diag(prior.r_diag)
    num = spd_logdet(x.T @ x / design.n + r)
    den = spd_logdet(full_moment_matrix(design.m) + r)
    return float(np.exp((num - den) / design.p))
