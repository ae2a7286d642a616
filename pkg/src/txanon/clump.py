"""Greedy clustering anonymizer (Clump).

Transactions are visited in decreasing length.  Every k-th one seeds a
cluster; the rest fill under-capacity clusters (searching only the first
``r`` of them) and any leftovers go to the cheapest cluster overall.  Each
cluster keeps its LCG up to date incrementally, so scoring a candidate
costs one two-transaction LCG.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import kernels
from .anonymized import AnonymizedDb
from .lcg import Distortion, GeneralizedTransaction, ggd, incremental_lcg
from .taxonomy import TaxonomyTree
from .translog import DataError, TransactionDb, order_by_length_desc


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ClumpConfig:
    k: int = 5
    r: int = 10
    dedup_output: bool = False

    def __post_init__(self):
        if self.k < 2:
            raise ConfigError("k must be >= 2")
        if self.r < 1:
            raise ConfigError("r must be >= 1")


@dataclass
class Cluster:
    members: list[int]
    lcg: GeneralizedTransaction
    distortion: Distortion

    def __len__(self) -> int:
        return len(self.members)


# (transaction index, [(cluster index, GGD if added)]) per assignment
CandidateTrace = Callable[[int, list[tuple[int, Fraction]]], None]


def cluster(
    db: TransactionDb,
    taxonomy: TaxonomyTree,
    cfg: ClumpConfig,
    backend: str | None = None,
    trace: CandidateTrace | None = None,
) -> list[Cluster]:
    """Partition ``db`` into ``len(db) // k`` clusters of size k .. 2k-1.

    ``trace`` receives the GGD of every candidate considered for every
    assignment, recomputed independently of the kernel; it is slow and meant
    for inspection and tests.
    """
    k, r = cfg.k, cfg.r
    if len(db) < k:
        raise DataError(f"k={k} exceeds database size {len(db)}")
    kern = kernels.get(backend)
    indptr, items = db.csr
    lengths = db.lengths
    order = order_by_length_desc(lengths, backend)
    n = len(db) // k

    width = int(lengths.max())
    lcg_buf = np.zeros((n, width), dtype=np.int64)
    lcg_len = np.zeros(n, dtype=np.int64)
    sizes = np.zeros(n, dtype=np.int64)
    sumlens = np.zeros(n, dtype=np.int64)
    members: list[list[int]] = [[] for _ in range(n)]

    for c in range(n):
        j = int(order[c * k])
        g = kern.lcg(taxonomy, indptr[j : j + 2] - indptr[j], items[indptr[j] : indptr[j + 1]])
        lcg_buf[c, : len(g)] = g
        lcg_len[c] = len(g)
        sizes[c] = 1
        sumlens[c] = lengths[j]
        members[c].append(j)

    seeds = np.zeros(len(db), dtype=bool)
    seeds[np.arange(n) * k] = True
    rest = order[~seeds]
    open_clusters = list(range(n))
    all_clusters = np.arange(n, dtype=np.int64)

    for j in rest:
        j = int(j)
        t = items[indptr[j] : indptr[j + 1]]
        filling = bool(open_clusters)
        cand = np.asarray(open_clusters[:r], dtype=np.int64) if filling else all_clusters
        if trace is not None:
            trace(j, _candidate_ggds(cand, lcg_buf, lcg_len, members, db, taxonomy, t))
        ci, _, g = kern.best_merge(taxonomy, lcg_buf, lcg_len, cand, sizes, sumlens, t)
        c = int(cand[ci])
        lcg_buf[c, : len(g)] = g
        lcg_len[c] = len(g)
        sizes[c] += 1
        sumlens[c] += lengths[j]
        members[c].append(j)
        if filling and sizes[c] == k:
            del open_clusters[bisect.bisect_left(open_clusters, c)]

    out = []
    lm_num, den = taxonomy.lm_num, taxonomy.lm_den
    for c in range(n):
        g = lcg_buf[c, : lcg_len[c]]
        size = int(sizes[c])
        dist = Distortion(
            Fraction(size * int(lm_num[g].sum()), den), int(sumlens[c]) - size * len(g)
        )
        out.append(Cluster(members[c], GeneralizedTransaction(tuple(int(i) for i in g)), dist))
    return out


def _candidate_ggds(cand, lcg_buf, lcg_len, members, db, taxonomy, t):
    res = []
    for c in cand:
        c = int(c)
        cur = GeneralizedTransaction(tuple(int(i) for i in lcg_buf[c, : lcg_len[c]]))
        g = incremental_lcg(cur, t, taxonomy)
        group = [db[m] for m in members[c]] + [tuple(int(i) for i in t)]
        res.append((c, ggd(group, g, taxonomy).total))
    return res


def anonymize(clusters: list[Cluster], db: TransactionDb, cfg: ClumpConfig) -> AnonymizedDb:
    """Publish each cluster's LCG for all its members (deduplicated for Clump2)."""
    groups = []
    for cl in sorted(clusters, key=lambda cl: min(cl.members)):
        g = cl.lcg.dedup() if cfg.dedup_output else cl.lcg
        groups.append((g, tuple(db[m].tid for m in sorted(cl.members))))
    return AnonymizedDb(groups)


def clump(
    db: TransactionDb, taxonomy: TaxonomyTree, cfg: ClumpConfig, backend: str | None = None
) -> tuple[AnonymizedDb, list[Cluster]]:
    clusters = cluster(db, taxonomy, cfg, backend)
    return anonymize(clusters, db, cfg), clusters
