"""Compiled kernels.  Every function here has a twin in ``_numpy``."""

from __future__ import annotations

import numpy as np

NAME = "numba"
from numba import njit

_BIG = np.iinfo(np.int64).max


@njit(cache=True)
def _counting_sort_desc(lengths):
    n = lengths.shape[0]
    out = np.empty(n, np.int64)
    if n == 0:
        return out
    top = lengths.max()
    start = np.zeros(top + 2, np.int64)
    for i in range(n):
        start[top - lengths[i] + 1] += 1
    for b in range(1, top + 2):
        start[b] += start[b - 1]
    for i in range(n):
        b = top - lengths[i]
        out[start[b]] = i
        start[b] += 1
    return out


@njit(cache=True)
def _lcg_into(indptr, items, parent, level, rank, pos, touched, out):
    """Bottom-up generalization over the union of the items' root paths.

    A node emits ``min_j R[j]`` copies of itself and hands the per-transaction
    surplus ``R[j] - min`` to its parent.  Nodes with no item underneath have
    all-zero counts and cannot emit, so restricting the sweep to touched
    nodes leaves the result unchanged.  ``pos`` must be all -1 on entry and is restored on exit.
    Writes the LCG in canonical order into ``out`` and returns its length.
    """
    m = indptr.shape[0] - 1
    nt = 0
    for p in range(items.shape[0]):
        v = items[p]
        while v >= 0 and pos[v] < 0:
            pos[v] = nt
            touched[nt] = v
            nt += 1
            v = parent[v]

    counts_by_tr = np.zeros((nt, m), np.int64)
    minlen = _BIG
    for j in range(m):
        lo = indptr[j]
        hi = indptr[j + 1]
        if hi - lo < minlen:
            minlen = hi - lo
        for p in range(lo, hi):
            counts_by_tr[pos[items[p]], j] += 1

    neg_level = np.empty(nt, np.int64)
    for q in range(nt):
        neg_level[q] = -level[touched[q]]
    order = np.argsort(neg_level, kind="mergesort")

    emit = np.zeros(nt, np.int64)
    emitted = 0
    root_q = -1
    for qi in range(nt):
        q = order[qi]
        v = touched[q]
        if parent[v] < 0:
            root_q = q
            continue
        mn = counts_by_tr[q, 0]
        for j in range(1, m):
            if counts_by_tr[q, j] < mn:
                mn = counts_by_tr[q, j]
        if mn > 0:
            emit[q] = mn
            emitted += mn
        # the surplus beyond the emitted copies stays available to ancestors
        pq = pos[parent[v]]
        for j in range(m):
            counts_by_tr[pq, j] += counts_by_tr[q, j] - mn
    if root_q >= 0:
        emit[root_q] = minlen - emitted

    nz = 0
    for q in range(nt):
        if emit[q] > 0:
            nz += 1
    qs = np.empty(nz, np.int64)
    keys = np.empty(nz, np.int64)
    nz = 0
    for q in range(nt):
        if emit[q] > 0:
            qs[nz] = q
            keys[nz] = rank[touched[q]]
            nz += 1
    n_out = 0
    for qi in np.argsort(keys):
        q = qs[qi]
        for _ in range(emit[q]):
            out[n_out] = touched[q]
            n_out += 1

    for q in range(nt):
        pos[touched[q]] = -1
    return n_out


@njit(cache=True)
def _lcg(indptr, items, parent, level, rank):
    n_nodes = parent.shape[0]
    pos = np.full(n_nodes, -1, np.int64)
    touched = np.empty(n_nodes, np.int64)
    out = np.empty(items.shape[0] + 1, np.int64)
    n = _lcg_into(indptr, items, parent, level, rank, pos, touched, out)
    return out[:n].copy()


@njit(cache=True)
def _lcg_many(prob_ptr, tr_ptr, items, parent, level, rank):
    n_nodes = parent.shape[0]
    pos = np.full(n_nodes, -1, np.int64)
    touched = np.empty(n_nodes, np.int64)
    n_prob = prob_ptr.shape[0] - 1
    out_ptr = np.zeros(n_prob + 1, np.int64)
    out_items = np.empty(items.shape[0] + 1, np.int64)
    for b in range(n_prob):
        t0 = prob_ptr[b]
        t1 = prob_ptr[b + 1]
        base = tr_ptr[t0]
        local_ptr = tr_ptr[t0 : t1 + 1] - base
        n = _lcg_into(
            local_ptr,
            items[base : tr_ptr[t1]],
            parent,
            level,
            rank,
            pos,
            touched,
            out_items[out_ptr[b] :],
        )
        out_ptr[b + 1] = out_ptr[b] + n
    return out_ptr, out_items[: out_ptr[n_prob]].copy()


@njit(cache=True)
def _best_merge(lcg_buf, lcg_len, cand, sizes, sumlens, t, parent, level, rank, lm_num, lm_den):
    n_nodes = parent.shape[0]
    pos = np.full(n_nodes, -1, np.int64)
    touched = np.empty(n_nodes, np.int64)
    lt = t.shape[0]
    width = lcg_buf.shape[1] + lt
    items = np.empty(width, np.int64)
    out = np.empty(width, np.int64)
    best_out = np.empty(width, np.int64)
    indptr = np.zeros(3, np.int64)
    best_ci = -1
    best_num = 0
    best_len = 0
    for ci in range(cand.shape[0]):
        c = cand[ci]
        la = lcg_len[c]
        items[:la] = lcg_buf[c, :la]
        items[la : la + lt] = t
        indptr[1] = la
        indptr[2] = la + lt
        n = _lcg_into(indptr, items[: la + lt], parent, level, rank, pos, touched, out)
        g = 0
        for q in range(n):
            g += lm_num[out[q]]
        s = sizes[c] + 1
        num = s * g + (sumlens[c] + lt - s * n) * lm_den
        if best_ci < 0 or num < best_num:
            best_ci = ci
            best_num = num
            best_len = n
            best_out[:n] = out[:n]
    return best_ci, best_num, best_out[:best_len].copy()


def counting_sort_desc(lengths: np.ndarray) -> np.ndarray:
    return _counting_sort_desc(np.ascontiguousarray(lengths, dtype=np.int64))


def lcg(tax, indptr: np.ndarray, items: np.ndarray) -> np.ndarray:
    return _lcg(
        np.asarray(indptr, dtype=np.int64),
        np.asarray(items, dtype=np.int64),
        tax.parent,
        tax.level,
        tax.rank,
    )


def lcg_many(tax, prob_ptr, tr_ptr, items):
    return _lcg_many(
        np.asarray(prob_ptr, dtype=np.int64),
        np.asarray(tr_ptr, dtype=np.int64),
        np.asarray(items, dtype=np.int64),
        tax.parent,
        tax.level,
        tax.rank,
    )


def best_merge(tax, lcg_buf, lcg_len, cand, sizes, sumlens, t):
    ci, num, g = _best_merge(
        lcg_buf,
        lcg_len,
        np.asarray(cand, dtype=np.int64),
        sizes,
        sumlens,
        np.asarray(t, dtype=np.int64),
        tax.parent,
        tax.level,
        tax.rank,
        tax.lm_num,
        tax.lm_den,
    )
    return int(ci), int(num), g
