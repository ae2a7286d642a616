"""Least common generalization (LCG) of transaction sets and its distortion."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from . import kernels
from .taxonomy import TaxonomyTree
from .translog import Transaction


@dataclass(frozen=True)
class GeneralizedTransaction:
    """Multiset of taxonomy nodes, stored in canonical order.

    Canonical order is deeper level first, then preorder, so two equal
    multisets compare equal structurally.  Build through :meth:`of` unless
    the items are already canonical.
    """

    items: tuple[int, ...]

    @classmethod
    def of(cls, items: Iterable[int], taxonomy: TaxonomyTree) -> "GeneralizedTransaction":
        rank = taxonomy.rank
        return cls(tuple(sorted((int(i) for i in items), key=lambda i: rank[i])))

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def labels(self, taxonomy: TaxonomyTree) -> list[str]:
        return [taxonomy.labels[i] for i in self.items]

    def dedup(self) -> "GeneralizedTransaction":
        return GeneralizedTransaction(tuple(dict.fromkeys(self.items)))


ItemBag = Union[Transaction, GeneralizedTransaction, Sequence[int]]


@dataclass(frozen=True)
class Distortion:
    generalization_part: Fraction
    suppression_part: int

    @property
    def total(self) -> Fraction:
        return self.generalization_part + self.suppression_part

    def __add__(self, other: "Distortion") -> "Distortion":
        return Distortion(
            self.generalization_part + other.generalization_part,
            self.suppression_part + other.suppression_part,
        )


ZERO_DISTORTION = Distortion(Fraction(0), 0)


class LCGError(ValueError):
    pass


def _items(x: ItemBag) -> tuple[int, ...]:
    if isinstance(x, (Transaction, GeneralizedTransaction)):
        return x.items
    return tuple(int(i) for i in x)


def to_csr(bags: Sequence[ItemBag]) -> tuple[np.ndarray, np.ndarray]:
    seqs = [_items(b) for b in bags]
    indptr = np.zeros(len(seqs) + 1, dtype=np.int64)
    np.cumsum([len(s) for s in seqs], out=indptr[1:])
    items = np.fromiter((i for s in seqs for i in s), dtype=np.int64, count=int(indptr[-1]))
    return indptr, items


def min_tran_size(bags: Sequence[ItemBag]) -> int:
    if not bags:
        raise LCGError("empty transaction set")
    return min(len(_items(b)) for b in bags)


def _check(bags: Sequence[ItemBag], taxonomy: TaxonomyTree) -> None:
    if not bags:
        raise LCGError("LCG of an empty set")
    n = len(taxonomy)
    for b in bags:
        its = _items(b)
        if not its:
            raise LCGError("LCG of a set containing an empty transaction")
        if min(its) < 0 or max(its) >= n:
            raise LCGError(f"item outside taxonomy in {its}")


def buig_lcg(
    bags: Sequence[ItemBag], taxonomy: TaxonomyTree, backend: str | None = None
) -> GeneralizedTransaction:
    """Bottom-up item generalization.

    Each node emits ``min_j R[j]`` copies of itself once every transaction
    has an unrepresented item beneath it; otherwise its counts flow to the
    parent.  Root copies pad the result to the shortest transaction length.
    Item multiplicities seed ``R``, so bags with duplicates are handled.
    """
    _check(bags, taxonomy)
    indptr, items = to_csr(bags)
    out = kernels.get(backend).lcg(taxonomy, indptr, items)
    return GeneralizedTransaction(tuple(int(i) for i in out))


def incremental_lcg(
    current: GeneralizedTransaction,
    new: ItemBag,
    taxonomy: TaxonomyTree,
    backend: str | None = None,
) -> GeneralizedTransaction:
    """LCG(S + {t}) from LCG(S) and t alone."""
    return buig_lcg([current, new], taxonomy, backend)


def is_generalization_fast(g: ItemBag, t: ItemBag, taxonomy: TaxonomyTree) -> bool:
    """Greedy check that ``g`` generalizes ``t`` (distinct item per node).

    Assigning deepest nodes first to any free descendant is optimal on a
    tree because deeper nodes' subtrees are nested inside or disjoint from
    shallower ones.
    """
    pool = list(_items(t))
    level = taxonomy.level
    for a in sorted(_items(g), key=lambda i: -level[i]):
        for k, b in enumerate(pool):
            if taxonomy.is_ancestor(a, b):
                pool.pop(k)
                break
        else:
            return False
    return True


def ggd(
    bags: Sequence[ItemBag],
    g: ItemBag,
    taxonomy: TaxonomyTree,
    validate: bool = False,
) -> Distortion:
    """Group generalization distortion of publishing every member of ``bags`` as ``g``.

    ``|S| * sum(LM(i) for i in g)`` plus one per suppressed occurrence.
    """
    g_items = _items(g)
    if validate:
        for b in bags:
            if not is_generalization_fast(g_items, b, taxonomy):
                raise LCGError("g is not a common generalization of the set")
    lm_sum = sum(int(taxonomy.lm_num[i]) for i in g_items)
    gen = Fraction(len(bags) * lm_sum, taxonomy.lm_den)
    sup = sum(len(_items(b)) - len(g_items) for b in bags)
    return Distortion(gen, sup)


def ggd_numerator(size: int, sum_len: int, g: Sequence[int], taxonomy: TaxonomyTree) -> int:
    """``ggd * lm_den`` as an integer, from cluster size and total member length."""
    lm_sum = int(sum(int(taxonomy.lm_num[i]) for i in g))
    return size * lm_sum + (sum_len - size * len(g)) * taxonomy.lm_den
