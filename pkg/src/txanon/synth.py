"""Seeded synthetic query-log data over a taxonomy.

Each user has a few topics (internal nodes, Zipf-popular) and draws most of
their terms from leaves under those topics, the rest from the whole leaf
set.  Items are deduplicated per user, as in the query-log preprocessing.
"""

from __future__ import annotations

import numpy as np

from .taxonomy import TaxonomyTree
from .translog import Transaction, TransactionDb


def synthetic_transactions(
    taxonomy: TaxonomyTree,
    n: int,
    mean_length: float = 8.0,
    topics_per_user: tuple[int, int] = (1, 3),
    topic_level: int = 2,
    on_topic: float = 0.2,
    zipf: float = 1.1,
    item_zipf: float = 1.0,
    length_dist: str = "poisson",
    seed: int = 0,
) -> TransactionDb:
    rng = np.random.default_rng(seed)
    leaves = np.flatnonzero(taxonomy.leaf_count == 1)
    leaves = leaves[[taxonomy.is_leaf(int(v)) for v in leaves]]
    level = taxonomy.level
    topics = np.flatnonzero((level == min(topic_level, taxonomy.height)) & (taxonomy.leaf_count > 1))
    if topics.size == 0:
        topics = np.array([taxonomy.root])
    topics = rng.permutation(topics)
    weights = 1.0 / np.arange(1, topics.size + 1) ** zipf
    weights /= weights.sum()
    lo = np.searchsorted(leaves, topics)
    hi = np.searchsorted(leaves, topics + taxonomy.subtree_size[topics])
    # leaf popularity: a shuffled Zipf rank, shared by topic and background draws
    pop = 1.0 / rng.permutation(np.arange(1, leaves.size + 1)) ** item_zipf
    cum = np.concatenate([[0.0], np.cumsum(pop)])

    def draw(a: int, b: int) -> int:
        u = cum[a] + rng.random() * (cum[b] - cum[a])
        return int(leaves[min(b - 1, max(a, np.searchsorted(cum, u, side="right") - 1))])

    transactions = []
    for u in range(n):
        if length_dist == "geometric":
            length = int(rng.geometric(1.0 / mean_length))
        else:
            length = max(1, int(rng.poisson(mean_length)))
        n_topics = int(rng.integers(topics_per_user[0], topics_per_user[1] + 1))
        mine = rng.choice(topics.size, size=n_topics, p=weights)
        picks = []
        for _ in range(length):
            if rng.random() < on_topic:
                t = mine[int(rng.integers(n_topics))]
                picks.append(draw(lo[t], hi[t]))
            else:
                picks.append(draw(0, leaves.size))
        transactions.append(Transaction(f"u{u}", tuple(dict.fromkeys(picks))))
    return TransactionDb(transactions, taxonomy)


SUITE_TAXONOMY = dict(leaf_target=10_000, branching=(2, 6), depth_target=12, seed=7)


def utility_suite(n_datasets: int = 20, size: int = 1000, seed: int = 100):
    """Fixed datasets spanning roughly 0.1% to 0.3% density.

    Yields ``(taxonomy, db)``; the taxonomy is shared.  Mean lengths are
    spread evenly and length distributions alternate Poisson / geometric.
    """
    from .taxonomy import generate_synthetic

    tax = generate_synthetic(**SUITE_TAXONOMY)
    for i, ml in enumerate(np.linspace(11, 32, n_datasets)):
        yield tax, synthetic_transactions(
            tax,
            size,
            mean_length=float(ml),
            length_dist=("poisson", "geometric")[i % 2],
            seed=seed + i,
        )
