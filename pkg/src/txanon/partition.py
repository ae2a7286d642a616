"""Top-down Partition baseline for set-valued data.

Every partition carries a representation: an antichain of taxonomy nodes
that each member has at least one item under.  Drilling down a node ``x``
splits the members by the set of ``x``'s children they have items under;
splits with fewer than k members are merged back with ``x`` frozen.
Duplicates are ignored throughout.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .anonymized import AnonymizedDb, total_distortion
from .lcg import Distortion, GeneralizedTransaction
from .taxonomy import TaxonomyTree
from .translog import DataError, TransactionDb


@dataclass
class PartitionNode:
    representation: frozenset[int]
    members: list[int]
    frontier: frozenset[int]


def _split(taxonomy: TaxonomyTree, sets: list[frozenset[int]], members: list[int], x: int):
    lo, hi = x + 1, x + int(taxonomy.subtree_size[x])
    depth = int(taxonomy.level[x])
    anc = taxonomy.ancestors
    groups: dict[frozenset[int], list[int]] = {}
    empty = []
    for m in members:
        key = frozenset(int(anc[i, depth]) for i in sets[m] if lo <= i < hi)
        if key:
            groups.setdefault(key, []).append(m)
        else:
            empty.append(m)
    return groups, empty


def partition_nodes(db: TransactionDb, taxonomy: TaxonomyTree, k: int) -> list[PartitionNode]:
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(db) < k:
        raise DataError(f"k={k} exceeds database size {len(db)}")
    sets = [frozenset(t.items) for t in db]
    root = taxonomy.root
    start_frontier = frozenset() if taxonomy.is_leaf(root) else frozenset([root])
    queue = deque([PartitionNode(frozenset([root]), list(range(len(db))), start_frontier)])
    done = []
    while queue:
        node = queue.popleft()
        if not node.frontier:
            done.append(node)
            continue
        # most general first, preorder among equals
        x = min(node.frontier, key=lambda v: (taxonomy.level[v], v))
        groups, leftover = _split(taxonomy, sets, node.members, x)
        survivors = []
        for key, mem in groups.items():
            if len(mem) >= k:
                survivors.append((key, mem))
            else:
                leftover.extend(mem)
        # an undersized merged-back group is padded by dissolving the smallest survivors
        while 0 < len(leftover) < k and survivors:
            smallest = min(range(len(survivors)), key=lambda s: (len(survivors[s][1]), -s))
            leftover.extend(survivors.pop(smallest)[1])
        rest = node.frontier - {x}
        for key, mem in survivors:
            grown = frozenset(c for c in key if not taxonomy.is_leaf(c))
            queue.append(PartitionNode((node.representation - {x}) | key, mem, rest | grown))
        if leftover:
            queue.append(PartitionNode(node.representation, sorted(leftover), rest))
    return done


def partition_anonymize(db: TransactionDb, taxonomy: TaxonomyTree, k: int) -> AnonymizedDb:
    nodes = partition_nodes(db, taxonomy, k)
    groups = []
    for node in sorted(nodes, key=lambda p: min(p.members)):
        g = GeneralizedTransaction.of(node.representation, taxonomy)
        groups.append((g, tuple(db[m].tid for m in sorted(node.members))))
    return AnonymizedDb(groups)


def partition_distortion(result: AnonymizedDb, db: TransactionDb) -> Distortion:
    return total_distortion(result, db)
