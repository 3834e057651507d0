"""Direct construction of highly efficient designs without search.

Small base designs are expanded one vertex at a time: every row of the
current design spawns one new row per rotation of its vertex sequence, each
rotation shifted up by one and prefixed with the new lowest vertex 1. The
row count therefore grows from 6 at m=5 to 30 at m=6, 180 at m=7, and
(m-1)!/4 in general, while the per-row moment matrix of the result stays
equal to the equal-weight benchmark's.
"""

from __future__ import annotations

import math
from itertools import combinations, combinations_with_replacement

import numpy as np

from .circuits import canonicalize, enumerate_circuits
from .criteria import Design, PriorSpec, bayes_d_criterion, model_matrix, spd_logdet
from .errors import ConfigError, SizeLimitError

EXPANSION_LIMIT = 10

# Six-circuit seed on five vertices; every edge appears exactly three times.
_BASE_5 = (
    (1, 2, 4, 3, 5),
    (1, 2, 3, 5, 4),
    (1, 2, 5, 4, 3),
    (1, 5, 2, 3, 4),
    (1, 3, 2, 4, 5),
    (1, 3, 5, 2, 4),
)


def base_design(m: int) -> Design:
    """Hand-sized starting design: six rows at m=5, six rows at m=4.

    For other m use :func:`construct_design`, which expands one of these, or
    the search routines.
    """
    if m == 5:
        return Design(5, tuple(canonicalize(r) for r in _BASE_5))
    if m == 4:
        return _base_design_4()
    raise ConfigError(
        f"no tabulated base design for m={m}; use construct_design() or a search"
    )


def _base_design_4() -> Design:
    # Only three distinct circuits exist on 4 vertices, so the best
    # six-row multiset is found by checking all 28 of them.
    circuits = enumerate_circuits(4)
    prior = PriorSpec.isotropic(4, 1e-6)
    best = None
    best_val = -math.inf
    for combo in combinations_with_replacement(circuits, 6):
        d = Design(4, combo)
        v = bayes_d_criterion(d, prior)
        if v > best_val + 1e-12:
            best, best_val = d, v
    return best


def expand_design(design: Design) -> Design:
    """One expansion step: m -> m+1 vertices, n -> n*m rows.

    Each row contributes one new row per rotation of its sequence, with all
    vertex labels shifted up by one and vertex 1 prepended.
    """
    m_new = design.m + 1
    rows = []
    for c in design.circuits:
        s = c.vertices
        for t in range(len(s)):
            rot = s[-t:] + s[:-t] if t else s
            rows.append(canonicalize((1,) + tuple(v + 1 for v in rot)))
    return Design(m_new, tuple(rows))


def construct_design(m: int, start: Design | None = None) -> Design:
    """Design on m vertices built by repeated expansion.

    Starts from ``start`` if given (its vertex count must not exceed m),
    otherwise from the tabulated base at m=5 (or m=4 when m is 4).
    """
    if m > EXPANSION_LIMIT:
        rows = math.factorial(m - 1) // 4
        raise SizeLimitError(
            f"construction to m={m} would produce {rows} rows; "
            f"limit is m={EXPANSION_LIMIT}"
        )
    if start is None:
        if m < 4:
            raise ConfigError(f"constructed designs start at m=4, got m={m}")
        start = base_design(4 if m == 4 else 5)
    if start.m > m:
        raise ConfigError(f"cannot shrink a design from m={start.m} to m={m}")
    d = start
    while d.m < m:
        d = expand_design(d)
    return d


EXHAUSTIVE_SUBSET_LIMIT = 10 ** 7


def exhaustive_optimal(m: int, n: int, prior: PriorSpec) -> Design:
    """Best n-subset of all circuits by the design criterion; slow but exact.

    Subsets are without replacement; ties keep the lexicographically first
    subset. Work is capped at 10^7 candidate subsets.
    """
    pool = enumerate_circuits(m)
    total = math.comb(len(pool), n)
    if total > EXHAUSTIVE_SUBSET_LIMIT:
        raise SizeLimitError(
            f"{total} subsets of size n={n} exceed the {EXHAUSTIVE_SUBSET_LIMIT} cap")
    encodings = model_matrix(Design(m, tuple(pool)))
    r = np.diag(prior.r_diag)
    best = None
    best_val = -math.inf
    for idx in combinations(range(len(pool)), n):
        x = encodings[list(idx)]
        val = spd_logdet(x.T @ x + r)
        if val > best_val + 1e-12:
            best, best_val = idx, val
    return Design(m, tuple(pool[i] for i in best))
