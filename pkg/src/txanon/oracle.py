"""Brute-force reference implementations, for testing and ``--validate``.

Nothing here shares code with the kernels: the generalization relation is
decided by bipartite matching and LCGs are found by exhaustive search.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .lcg import GeneralizedTransaction, ItemBag, _items
from .taxonomy import TaxonomyTree

ENUMERATION_GUARD = 10**6


class OracleError(RuntimeError):
    pass


def _path_to_root(taxonomy: TaxonomyTree, i: int) -> list[int]:
    out = []
    while i >= 0:
        out.append(i)
        i = int(taxonomy.parent[i])
    return out


def _ancestor(taxonomy: TaxonomyTree, a: int, b: int) -> bool:
    return a in _path_to_root(taxonomy, b)


def max_matching(g: Sequence[int], t: Sequence[int], taxonomy: TaxonomyTree) -> int:
    """Size of a maximum matching between nodes of ``g`` and the items of ``t`` they generalize."""
    adj = [[j for j, b in enumerate(t) if _ancestor(taxonomy, a, b)] for a in g]
    match_of_t = [-1] * len(t)

    def augment(u: int, seen: list[bool]) -> bool:
        for j in adj[u]:
            if not seen[j]:
                seen[j] = True
                if match_of_t[j] < 0 or augment(match_of_t[j], seen):
                    match_of_t[j] = u
                    return True
        return False

    return sum(augment(u, [False] * len(t)) for u in range(len(g)))


def is_common_generalization(g: ItemBag, bags: Sequence[ItemBag], taxonomy: TaxonomyTree) -> bool:
    g_items = _items(g)
    for b in bags:
        t_items = _items(b)
        if len(g_items) > len(t_items):
            return False
        if max_matching(g_items, t_items, taxonomy) != len(g_items):
            return False
    return True


def _choice_lists(x: Sequence[int], taxonomy: TaxonomyTree, allow_suppress: bool):
    lists = []
    for i in x:
        opts = _path_to_root(taxonomy, i)
        lists.append(([None] if allow_suppress else []) + opts)
    total = 1
    for opts in lists:
        total *= len(opts)
    if total > ENUMERATION_GUARD:
        raise OracleError(f"enumeration guard exceeded: {total} candidates")
    return lists


def _canonical(nodes, taxonomy: TaxonomyTree) -> GeneralizedTransaction:
    return GeneralizedTransaction.of((n for n in nodes if n is not None), taxonomy)


def enumerate_generalizations(x: ItemBag, taxonomy: TaxonomyTree) -> set[GeneralizedTransaction]:
    """Every generalized transaction of ``x``, the empty one included.

    Each item of ``x`` is either suppressed or replaced by one of its
    ancestors (itself included).
    """
    lists = _choice_lists(_items(x), taxonomy, allow_suppress=True)
    return {_canonical(combo, taxonomy) for combo in itertools.product(*lists)}


def brute_force_lcg(bags: Sequence[ItemBag], taxonomy: TaxonomyTree) -> GeneralizedTransaction:
    """The unique most specific common generalization of full length, by search."""
    if not bags:
        raise OracleError("empty set")
    shortest = min((_items(b) for b in bags), key=len)
    # a full-length common generalization must use every item of the shortest bag
    lists = _choice_lists(shortest, taxonomy, allow_suppress=False)
    cands = {_canonical(c, taxonomy) for c in itertools.product(*lists)}
    cands = [g for g in cands if is_common_generalization(g, bags, taxonomy)]
    minimal = [
        g
        for g in cands
        if not any(h != g and is_common_generalization(g, [h], taxonomy) for h in cands)
    ]
    if len(minimal) != 1:
        raise OracleError(f"expected a unique minimal candidate, found {len(minimal)}")
    return minimal[0]
