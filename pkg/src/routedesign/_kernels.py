"""Compiled inner loops for the design searches.

Both searches walk over adjacent-transposition moves on the rows of a
design. A move swaps two neighbouring vertices in one row, which replaces
that row's indicator x_old by x_new, so

    A' = A + x_new x_new' - x_old x_old',   A = X'X + R.

The change in log det A is evaluated with the matrix determinant lemma and,
on acceptance, A^{-1} is updated in place with the rank-two Woodbury
identity. Everything operates on preallocated arrays; random numbers are
drawn by the caller so results do not depend on scheduling.
"""

import numpy as np
from numba import njit

REFRESH_EVERY = 256  # exact inverse rebuild cadence, bounds drift


@njit(cache=True, nogil=True)
def _row_edge_ids(row, etab, out):
    m = row.shape[0]
    for i in range(m):
        a = row[i]
        b = row[(i + 1) % m]
        out[i] = etab[a, b]


@njit(cache=True, nogil=True)
def _gram_inverse(rows, etab, r_diag):
    # A = sum of row outer products + diag(r); returns (A^{-1}, log det A)
    n, m = rows.shape
    p = r_diag.shape[0]
    a = np.zeros((p, p))
    ids = np.empty(m, dtype=np.int64)
    for r in range(n):
        _row_edge_ids(rows[r], etab, ids)
        for i in range(m):
            for j in range(m):
                a[ids[i], ids[j]] += 1.0
    for q in range(p):
        a[q, q] += r_diag[q]
    sign, logdet = np.linalg.slogdet(a)
    return np.linalg.inv(a), sign * logdet


@njit(cache=True, nogil=True)
def _quads(ainv, ids_new, ids_old):
    m = ids_new.shape[0]
    s11 = 0.0
    s22 = 0.0
    s12 = 0.0
    for i in range(m):
        for j in range(m):
            s11 += ainv[ids_new[i], ids_new[j]]
            s22 += ainv[ids_old[i], ids_old[j]]
            s12 += ainv[ids_new[i], ids_old[j]]
    return s11, s22, s12


@njit(cache=True, nogil=True)
def _apply_rank2(ainv, ids_new, ids_old, s11, s22, s12, zn, zo):
    # Woodbury downdate/update for A + xn xn' - xo xo'; the 2x2 capacitance
    # matrix K = [[1+s11, s12], [s12, s22-1]] is inverted analytically.
    p = ainv.shape[0]
    m = ids_new.shape[0]
    for q in range(p):
        sn = 0.0
        so = 0.0
        for i in range(m):
            sn += ainv[q, ids_new[i]]
            so += ainv[q, ids_old[i]]
        zn[q] = sn
        zo[q] = so
    det_k = (1.0 + s11) * (s22 - 1.0) - s12 * s12
    k00 = (s22 - 1.0) / det_k
    k01 = -s12 / det_k
    k11 = (1.0 + s11) / det_k
    for q in range(p):
        cn = zn[q] * k00 + zo[q] * k01
        co = zn[q] * k01 + zo[q] * k11
        for r in range(p):
            ainv[q, r] -= cn * zn[r] + co * zo[r]


@njit(cache=True, nogil=True)
def swap_logdet_delta(rows, etab, ainv, r, j):
    """Change in log det(X'X + R) if row r swaps positions j and j+1."""
    m = rows.shape[1]
    ids_old = np.empty(m, dtype=np.int64)
    ids_new = np.empty(m, dtype=np.int64)
    _row_edge_ids(rows[r], etab, ids_old)
    rows[r, j], rows[r, j + 1] = rows[r, j + 1], rows[r, j]
    _row_edge_ids(rows[r], etab, ids_new)
    rows[r, j], rows[r, j + 1] = rows[r, j + 1], rows[r, j]
    s11, s22, s12 = _quads(ainv, ids_new, ids_old)
    det2 = (1.0 + s11) * (1.0 - s22) + s12 * s12
    return np.log(det2)


@njit(cache=True, nogil=True)
def bubble_search(rows, etab, r_diag, max_sweeps):
    """Greedy adjacent-swap descent, in place; returns the final criterion.

    Each row is rescanned until none of its swaps improves, rows are visited
    in order, and sweeps repeat until one full sweep accepts nothing.
    """
    n, m = rows.shape
    p = r_diag.shape[0]
    ainv, logdet = _gram_inverse(rows, etab, r_diag)
    ids_old = np.empty(m, dtype=np.int64)
    ids_new = np.empty(m, dtype=np.int64)
    zn = np.empty(p)
    zo = np.empty(p)
    accepts = 0
    for _sweep in range(max_sweeps):
        improved_any = False
        for r in range(n):
            rescan = True
            while rescan:
                rescan = False
                for j in range(1, m - 1):
                    _row_edge_ids(rows[r], etab, ids_old)
                    rows[r, j], rows[r, j + 1] = rows[r, j + 1], rows[r, j]
                    _row_edge_ids(rows[r], etab, ids_new)
                    s11, s22, s12 = _quads(ainv, ids_new, ids_old)
                    det2 = (1.0 + s11) * (1.0 - s22) + s12 * s12
                    if det2 > 0.0 and np.log(det2) > 1e-12:
                        _apply_rank2(ainv, ids_new, ids_old, s11, s22, s12, zn, zo)
                        logdet += np.log(det2)
                        accepts += 1
                        if accepts % REFRESH_EVERY == 0:
                            ainv, logdet = _gram_inverse(rows, etab, r_diag)
                        rescan = True
                        improved_any = True
                    else:
                        rows[r, j], rows[r, j + 1] = rows[r, j + 1], rows[r, j]
        if not improved_any:
            break
    return logdet


@njit(cache=True, nogil=True)
def anneal_search(rows, etab, r_diag, cooling, u01, move_row, move_pos):
    """Simulated annealing over adjacent swaps, in place.

    Moves that do not lower the criterion are always taken; a lowering move
    survives with probability exp(delta * log(t + 2) / cooling), so the
    temperature 1/log(t + 2) falls as the iteration count t grows. Returns
    (best rows seen, criterion of the best, final criterion).
    """
    n, m = rows.shape
    p = r_diag.shape[0]
    niter = u01.shape[0]
    ainv, logdet = _gram_inverse(rows, etab, r_diag)
    best_rows = rows.copy()
    best_logdet = logdet
    ids_old = np.empty(m, dtype=np.int64)
    ids_new = np.empty(m, dtype=np.int64)
    zn = np.empty(p)
    zo = np.empty(p)
    accepts = 0
    for t in range(niter):
        r = move_row[t]
        j = move_pos[t]
        _row_edge_ids(rows[r], etab, ids_old)
        rows[r, j], rows[r, j + 1] = rows[r, j + 1], rows[r, j]
        _row_edge_ids(rows[r], etab, ids_new)
        s11, s22, s12 = _quads(ainv, ids_new, ids_old)
        det2 = (1.0 + s11) * (1.0 - s22) + s12 * s12
        accept = False
        if det2 > 0.0:
            delta = np.log(det2)
            if delta >= 0.0:
                accept = True
            else:
                accept = u01[t] < np.exp(delta * np.log(t + 2.0) / cooling)
        if accept:
            _apply_rank2(ainv, ids_new, ids_old, s11, s22, s12, zn, zo)
            logdet += delta
            accepts += 1
            if accepts % REFRESH_EVERY == 0:
                ainv, logdet = _gram_inverse(rows, etab, r_diag)
            if logdet > best_logdet:
                best_logdet = logdet
                best_rows[:] = rows
        else:
            rows[r, j], rows[r, j + 1] = rows[r, j + 1], rows[r, j]
    return best_rows, best_logdet, logdet
