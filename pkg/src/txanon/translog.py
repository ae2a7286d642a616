"""Transactions, query-log ingestion and plain transaction files."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import kernels
from .taxonomy import TaxonomyTree, normalize_label


class DataError(ValueError):
    """Input data cannot produce a usable transaction database."""


@dataclass(frozen=True)
class Transaction:
    """A bag of taxonomy items; duplicates are allowed."""

    tid: str
    items: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.items)


@dataclass
class TransactionDb:
    transactions: list[Transaction]
    taxonomy: TaxonomyTree
    dropped_tokens: int = 0

    def __post_init__(self):
        tids = [t.tid for t in self.transactions]
        if len(set(tids)) != len(tids):
            raise DataError("transaction ids are not unique")

    def __len__(self) -> int:
        return len(self.transactions)

    def __getitem__(self, i: int) -> Transaction:
        return self.transactions[i]

    def __iter__(self):
        return iter(self.transactions)

    @cached_property
    def lengths(self) -> np.ndarray:
        return np.array([len(t) for t in self.transactions], dtype=np.int64)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, items) with transaction ``j`` at ``items[indptr[j]:indptr[j+1]]``."""
        indptr = np.zeros(len(self) + 1, dtype=np.int64)
        np.cumsum(self.lengths, out=indptr[1:])
        items = np.fromiter(
            (i for t in self.transactions for i in t.items), dtype=np.int64, count=int(indptr[-1])
        )
        return indptr, items

    def labels(self, j: int) -> list[str]:
        return [self.taxonomy.labels[i] for i in self.transactions[j].items]


@dataclass
class IngestStats:
    rows: int = 0
    skipped_rows: int = 0
    users: int = 0
    dropped_tokens: int = 0
    dropped_empty: int = 0
    transactions: int = 0
    header: bool = False

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _dedup(items: list[int]) -> list[int]:
    return list(dict.fromkeys(items))


def ingest_query_log(
    text: str,
    taxonomy: TaxonomyTree,
    merge_by_user: bool = True,
    dedup_items: bool = True,
) -> tuple[TransactionDb, IngestStats]:
    """Turn AOL-style TSV rows (AnonID, QueryContent, ...) into transactions.

    Query terms are lowercased and split on whitespace; terms that are not
    taxonomy labels are dropped.  Malformed rows are skipped, never fatal.
    """
    stats = IngestStats()
    lookup = taxonomy.label_index
    bags: dict[str, list[int]] = {}
    users: set[str] = set()
    lines = text.splitlines()
    if lines and lines[0].split("\t", 1)[0].strip() == "AnonID":
        stats.header = True
        lines = lines[1:]
    for row in lines:
        if not row.strip():
            continue
        stats.rows += 1
        cols = row.split("\t")
        if not 2 <= len(cols) <= 5 or not cols[0].strip():
            stats.skipped_rows += 1
            continue
        user = cols[0].strip()
        users.add(user)
        key = user if merge_by_user else f"{user}#{stats.rows}"
        bag = bags.setdefault(key, [])
        for tok in cols[1].lower().split():
            item = lookup.get(tok)
            if item is None:
                stats.dropped_tokens += 1
            else:
                bag.append(item)
    stats.users = len(users)

    transactions = []
    for key, bag in bags.items():
        if not bag:
            stats.dropped_empty += 1
            continue
        transactions.append(Transaction(key, tuple(_dedup(bag) if dedup_items else bag)))
    stats.transactions = len(transactions)
    if not transactions:
        raise DataError(
            f"no transactions survived ingestion ({stats.dropped_tokens} tokens dropped)"
        )
    return TransactionDb(transactions, taxonomy, stats.dropped_tokens), stats


def parse_transactions(
    text: str,
    taxonomy: TaxonomyTree,
    on_unknown: str = "drop",
    dedup_items: bool = False,
) -> TransactionDb:
    """Parse ``tid<TAB>item item ...`` or bare ``item item ...`` lines.

    Bare lines get ids ``1, 2, ...`` by transaction position.  Unknown labels
    are dropped and counted, or raise when ``on_unknown="error"``.
    """
    if on_unknown not in ("drop", "error"):
        raise ValueError("on_unknown must be 'drop' or 'error'")
    lookup = taxonomy.label_index
    transactions = []
    dropped = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip():
            continue
        if "\t" in raw:
            tid, body = raw.split("\t", 1)
            tid = tid.strip()
        else:
            tid, body = str(len(transactions) + 1), raw
        items = []
        for tok in body.split():
            item = lookup.get(normalize_label(tok))
            if item is None:
                if on_unknown == "error":
                    raise DataError(f"line {lineno}: unknown item {tok!r}")
                dropped += 1
            else:
                items.append(item)
        if dedup_items:
            items = _dedup(items)
        if items:
            transactions.append(Transaction(tid, tuple(items)))
    return TransactionDb(transactions, taxonomy, dropped)


def format_transactions(db: TransactionDb) -> str:
    labels = db.taxonomy.labels
    return "".join(
        f"{t.tid}\t{' '.join(labels[i] for i in t.items)}\n" for t in db.transactions
    )


def density(db: TransactionDb) -> Fraction:
    """Fraction of the |D| x |L| possible item occurrences that are present."""
    if len(db) == 0:
        raise DataError("density of an empty database")
    return Fraction(int(db.lengths.sum()), len(db) * db.taxonomy.total_leaves)


def order_by_length_desc(db: TransactionDb | np.ndarray, backend: str | None = None) -> np.ndarray:
    """Stable counting sort of transaction indices by decreasing length."""
    lengths = db.lengths if isinstance(db, TransactionDb) else np.asarray(db, dtype=np.int64)
    return kernels.get(backend).counting_sort_desc(lengths)
