"""Shared test helpers."""

import numpy as np

from txanon.taxonomy import generate_synthetic


def bag(tax, *labels):
    return tax.items(labels)


def random_instance(rng: np.random.Generator, max_leaves=12, max_bags=4, max_len=4):
    """Small tree plus a set of bags over any of its nodes (duplicates allowed)."""
    tax = generate_synthetic(int(rng.integers(2, max_leaves + 1)), (2, 4), 4, seed=int(rng.integers(2**31)))
    n = len(tax)
    bags = [
        [int(x) for x in rng.integers(0, n, size=int(rng.integers(1, max_len + 1)))]
        for _ in range(int(rng.integers(1, max_bags + 1)))
    ]
    return tax, bags
