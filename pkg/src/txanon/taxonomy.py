"""Item taxonomy: a rooted tree over the item universe.

Node ids are dense integers assigned in preorder, so ``id`` doubles as the
preorder index.  Children keep the order in which they were first declared.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class TaxonomyError(ValueError):
    """Raised for malformed or inconsistent taxonomy input."""


def normalize_label(label: str) -> str:
    return label.strip().lower()


class TaxonomyTree:
    """Immutable rooted tree of items.

    Build one with :func:`load_taxonomy`, :func:`generate_synthetic` or
    :meth:`from_parents`; the constructor expects already-preordered data.
    """

    def __init__(self, labels: Sequence[str], parent: Sequence[int]):
        n = len(labels)
        if n == 0:
            raise TaxonomyError("empty taxonomy")
        self.labels: tuple[str, ...] = tuple(labels)
        self.parent = np.asarray(parent, dtype=np.int64)
        if self.parent[0] != -1 or np.any(self.parent[1:] < 0):
            raise TaxonomyError("node 0 must be the only root")
        if np.any(self.parent[1:] >= np.arange(1, n)):
            raise TaxonomyError("nodes are not in preorder")

        children: list[list[int]] = [[] for _ in range(n)]
        for v in range(1, n):
            children[self.parent[v]].append(v)
        self.children: tuple[tuple[int, ...], ...] = tuple(tuple(c) for c in children)
        self.root = 0

        level = np.ones(n, dtype=np.int64)
        for v in range(1, n):
            level[v] = level[self.parent[v]] + 1
        self.level = level

        leaf_count = np.zeros(n, dtype=np.int64)
        subtree_size = np.ones(n, dtype=np.int64)
        for v in range(n - 1, -1, -1):
            if not children[v]:
                leaf_count[v] = 1
            p = self.parent[v]
            if p >= 0:
                leaf_count[p] += leaf_count[v]
                subtree_size[p] += subtree_size[v]
        self.leaf_count = leaf_count
        self.subtree_size = subtree_size
        # preorder contiguity: v, v + 1, ..., v + size - 1 is the subtree of v
        for v in range(1, n):
            p = self.parent[v]
            if not (p < v < p + subtree_size[p]):
                raise TaxonomyError("nodes are not in preorder")

        self.total_leaves = int(leaf_count[0])
        self.label_index: dict[str, int] = {}
        for i, lab in enumerate(self.labels):
            if lab in self.label_index:
                raise TaxonomyError(f"duplicate label {lab!r}")
            self.label_index[lab] = i

        # exact LM = lm_num / lm_den; root forced to 1 when M == 1
        if self.total_leaves > 1:
            self.lm_den = self.total_leaves - 1
            self.lm_num = leaf_count - 1
        else:
            self.lm_den = 1
            self.lm_num = np.zeros(n, dtype=np.int64)
            self.lm_num[0] = 1
        for arr in (self.parent, self.level, self.leaf_count, self.lm_num):
            arr.setflags(write=False)

    @classmethod
    def from_parents(cls, labels: Sequence[str], parent: Sequence[int]) -> "TaxonomyTree":
        """Build from arbitrary node order; relabels ids into preorder."""
        n = len(labels)
        roots = [v for v in range(n) if parent[v] < 0]
        if len(roots) != 1:
            raise TaxonomyError(f"expected exactly one root, found {len(roots)}")
        kids: list[list[int]] = [[] for _ in range(n)]
        for v in range(n):
            if parent[v] >= 0:
                kids[parent[v]].append(v)
        order = []
        stack = [roots[0]]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(reversed(kids[v]))
        if len(order) != n:
            raise TaxonomyError("cycle detected: some nodes are unreachable from the root")
        new_id = {old: i for i, old in enumerate(order)}
        new_parent = [-1 if parent[old] < 0 else new_id[parent[old]] for old in order]
        return cls([normalize_label(labels[old]) for old in order], new_parent)

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TaxonomyTree):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.parent, other.parent)

    def __repr__(self) -> str:
        return f"TaxonomyTree(nodes={len(self)}, leaves={self.total_leaves}, height={self.height})"

    @property
    def height(self) -> int:
        return int(self.level.max())

    def is_leaf(self, i: int) -> bool:
        return not self.children[i]

    def lm(self, i: int) -> Fraction:
        """Loss metric (M_p - 1) / (M - 1) as an exact fraction."""
        return Fraction(int(self.lm_num[i]), self.lm_den)

    def is_ancestor(self, a: int, b: int) -> bool:
        """True iff ``a`` is ``b`` or lies on the path from ``b`` to the root."""
        return a <= b < a + self.subtree_size[a]

    def item(self, label: str) -> int:
        return self.label_index[normalize_label(label)]

    def items(self, labels: Iterable[str]) -> list[int]:
        return [self.item(lab) for lab in labels]

    @cached_property
    def ancestors(self) -> np.ndarray:
        """``ancestors[v, d]`` is the ancestor of ``v`` at level ``d + 1`` (-1 past ``v``)."""
        n, h = len(self), self.height
        anc = np.full((n, h), -1, dtype=np.int64)
        anc[0, 0] = 0
        for v in range(1, n):
            lv = self.level[v]
            anc[v, : lv - 1] = anc[self.parent[v], : lv - 1]
            anc[v, lv - 1] = v
        anc.setflags(write=False)
        return anc

    @cached_property
    def rank(self) -> np.ndarray:
        """Canonical sort key: deeper nodes first, then preorder."""
        order = np.lexsort((np.arange(len(self)), -self.level))
        rank = np.empty(len(self), dtype=np.int64)
        rank[order] = np.arange(len(self))
        rank.setflags(write=False)
        return rank

    def serialize(self) -> str:
        """Edge list ``child<TAB>parent`` in preorder."""
        return "".join(
            f"{self.labels[v]}\t{self.labels[self.parent[v]]}\n" for v in range(1, len(self))
        )


def load_taxonomy(text: str) -> TaxonomyTree:
    """Parse a ``child<TAB>parent`` edge list (``#`` lines are comments)."""
    parent_of: dict[str, str] = {}
    seen: dict[str, None] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        parts = raw.split("\t")
        if len(parts) != 2:
            raise TaxonomyError(f"line {lineno}: expected 'child<TAB>parent'")
        child, par = normalize_label(parts[0]), normalize_label(parts[1])
        if not child or not par:
            raise TaxonomyError(f"line {lineno}: empty label")
        if child == par:
            raise TaxonomyError(f"cycle detected: {child!r} is its own parent")
        old = parent_of.get(child)
        if old is not None and old != par:
            raise TaxonomyError(
                f"line {lineno}: {child!r} declared under both {old!r} and {par!r}"
            )
        parent_of[child] = par
        seen.setdefault(par)
        seen.setdefault(child)
    if not parent_of:
        raise TaxonomyError("empty taxonomy")

    roots = [lab for lab in seen if lab not in parent_of]
    if not roots:
        raise TaxonomyError("cycle detected: no root")
    if len(roots) > 1:
        raise TaxonomyError(f"multiple roots: {', '.join(roots[:5])}")
    # root first, then children in the order their lines were declared
    labels = roots + list(parent_of)
    idx = {lab: i for i, lab in enumerate(labels)}
    parent = [-1] + [idx[parent_of[lab]] for lab in labels[1:]]
    return TaxonomyTree.from_parents(labels, parent)


def generate_synthetic(
    leaf_target: int,
    branching: tuple[int, int] = (2, 6),
    depth_target: int = 18,
    seed: int = 0,
) -> TaxonomyTree:
    """Grow a random tree with about ``leaf_target`` leaves.

    Leaves at level <= ``depth_target`` are expanded at random with a fan-out
    drawn from ``branching`` until the leaf count is reached.
    """
    lo, hi = branching
    if leaf_target < 1 or lo < 2 or hi < lo or depth_target < 0:
        raise TaxonomyError("infeasible synthetic taxonomy parameters")
    if leaf_target > 1 and (depth_target == 0 or hi**depth_target < leaf_target):
        raise TaxonomyError(
            f"cannot reach {leaf_target} leaves with fan-out <= {hi} and depth {depth_target}"
        )
    rng = np.random.default_rng(seed)
    parent = [-1]
    level = [1]
    expandable = [0] if depth_target >= 1 else []
    leaves = 1
    while leaves < leaf_target:
        if not expandable:
            raise TaxonomyError("ran out of expandable nodes before reaching leaf_target")
        pick = int(rng.integers(len(expandable)))
        v = expandable[pick]
        expandable[pick] = expandable[-1]
        expandable.pop()
        need = leaf_target - leaves
        b = int(rng.integers(lo, min(hi, max(lo, need + 1)) + 1))
        for _ in range(b):
            parent.append(v)
            level.append(level[v] + 1)
            if level[v] + 1 <= depth_target:
                expandable.append(len(parent) - 1)
        leaves += b - 1
    labels = [f"n{i}" for i in range(len(parent))]
    return TaxonomyTree.from_parents(labels, parent)
