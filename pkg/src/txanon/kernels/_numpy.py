"""Vectorized kernels: no compiler, one numpy pass per taxonomy level.

Many independent LCG problems are solved together by keying every touched
node as ``problem * n_nodes + node``.
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"

_BIG = np.iinfo(np.int64).max


def counting_sort_desc(lengths: np.ndarray) -> np.ndarray:
    lengths = np.asarray(lengths, dtype=np.int64)
    if lengths.size == 0:
        return np.empty(0, dtype=np.int64)
    keys = lengths.max() - lengths
    if keys.max() < 2**16:
        # numpy's stable sort on 16-bit keys is a radix sort
        keys = keys.astype(np.uint16)
    return np.argsort(keys, kind="stable").astype(np.int64)


def lcg_many(tax, prob_ptr, tr_ptr, items):
    """LCG of each problem; problem ``b`` owns transactions ``prob_ptr[b]:prob_ptr[b+1]``.

    Returns ``(out_ptr, out_items)`` in CSR layout, each LCG in canonical order.
    """
    prob_ptr = np.asarray(prob_ptr, dtype=np.int64)
    tr_ptr = np.asarray(tr_ptr, dtype=np.int64)
    items = np.asarray(items, dtype=np.int64)
    n_nodes = len(tax)
    n_prob = len(prob_ptr) - 1
    n_tr = len(tr_ptr) - 1
    tr_per_prob = np.diff(prob_ptr)
    tr_len = np.diff(tr_ptr)

    tr_prob = np.repeat(np.arange(n_prob), tr_per_prob)
    tr_col = np.arange(n_tr) - prob_ptr[tr_prob]
    item_tr = np.repeat(np.arange(n_tr), tr_len)
    item_prob = tr_prob[item_tr]

    chains = tax.ancestors[items]
    rows, cols = np.nonzero(chains >= 0)
    keys = np.unique(item_prob[rows] * n_nodes + chains[rows, cols])
    key_node = keys % n_nodes
    key_prob = keys // n_nodes
    key_level = tax.level[key_node]
    is_root = key_node == tax.root
    parent_idx = np.searchsorted(keys, key_prob * n_nodes + np.where(is_root, 0, tax.parent[key_node]))

    width = int(tr_per_prob.max()) if n_prob else 0
    counts = np.zeros((len(keys), width), dtype=np.int64)
    own = np.searchsorted(keys, item_prob * n_nodes + items)
    np.add.at(counts, (own, tr_col[item_tr]), 1)
    unused_col = np.arange(width)[None, :] >= tr_per_prob[key_prob][:, None]

    emit = np.zeros(len(keys), dtype=np.int64)
    by_level = np.argsort(-key_level, kind="stable")
    bounds = np.flatnonzero(np.diff(key_level[by_level])) + 1
    for sel in np.split(by_level, bounds):
        if key_level[sel[0]] == 1:
            continue
        mins = np.where(unused_col[sel], _BIG, counts[sel]).min(axis=1)
        emit[sel] = mins
        surplus = np.where(unused_col[sel], 0, counts[sel] - mins[:, None])
        np.add.at(counts, parent_idx[sel], surplus)

    minlen = np.minimum.reduceat(tr_len, prob_ptr[:-1]) if n_prob else tr_len[:0]
    emitted = np.zeros(n_prob, dtype=np.int64)
    np.add.at(emitted, key_prob, emit)
    emit[is_root] = minlen[key_prob[is_root]] - emitted[key_prob[is_root]]

    nz = np.flatnonzero(emit > 0)
    nz = nz[np.lexsort((tax.rank[key_node[nz]], key_prob[nz]))]
    out_items = np.repeat(key_node[nz], emit[nz])
    out_ptr = np.zeros(n_prob + 1, dtype=np.int64)
    np.cumsum(minlen, out=out_ptr[1:])
    return out_ptr, out_items


def lcg(tax, indptr, items) -> np.ndarray:
    indptr = np.asarray(indptr, dtype=np.int64)
    _, out = lcg_many(tax, np.array([0, len(indptr) - 1]), indptr, items)
    return out


def best_merge(tax, lcg_buf, lcg_len, cand, sizes, sumlens, t):
    cand = np.asarray(cand, dtype=np.int64)
    t = np.asarray(t, dtype=np.int64)
    nc = len(cand)
    la = lcg_len[cand]
    lt = len(t)
    # problem b = (LCG of cluster cand[b], t)
    tr_len = np.empty(2 * nc, dtype=np.int64)
    tr_len[0::2] = la
    tr_len[1::2] = lt
    tr_ptr = np.zeros(2 * nc + 1, dtype=np.int64)
    np.cumsum(tr_len, out=tr_ptr[1:])
    # row b is [LCG items of cand[b]..., t...]; row-major masking packs them
    blocks = np.concatenate([lcg_buf[cand], np.broadcast_to(t, (nc, lt))], axis=1)
    keep = np.concatenate(
        [np.arange(lcg_buf.shape[1])[None, :] < la[:, None], np.ones((nc, lt), dtype=bool)], axis=1
    )
    flat = blocks[keep]
    out_ptr, out_items = lcg_many(tax, np.arange(0, 2 * nc + 1, 2), tr_ptr, flat)

    g_len = np.diff(out_ptr)
    g_sum = np.zeros(nc, dtype=np.int64)
    np.add.at(g_sum, np.repeat(np.arange(nc), g_len), tax.lm_num[out_items])
    s = sizes[cand] + 1
    num = s * g_sum + (sumlens[cand] + lt - s * g_len) * tax.lm_den
    ci = int(np.argmin(num))
    return ci, int(num[ci]), out_items[out_ptr[ci] : out_ptr[ci + 1]]
