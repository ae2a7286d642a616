"""Anonymized output: groups of records published as one generalized transaction."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .lcg import ZERO_DISTORTION, Distortion, GeneralizedTransaction, ggd
from .taxonomy import TaxonomyTree
from .translog import DataError, TransactionDb


@dataclass
class AnonymizedDb:
    """Each group is ``(generalized transaction, member tids)``.

    Groups are ordered by their earliest member in the input database.  The
    tid lists are the audit map and must not be published.
    """

    groups: list[tuple[GeneralizedTransaction, tuple[str, ...]]] = field(default_factory=list)

    def __len__(self) -> int:
        return sum(len(m) for _, m in self.groups)

    def audit_map(self) -> dict[str, int]:
        return {tid: gi for gi, (_, members) in enumerate(self.groups) for tid in members}

    def records(self):
        """Public records ``(group_id, generalized transaction)``, one per member."""
        for gi, (g, members) in enumerate(self.groups):
            for _ in members:
                yield gi + 1, g


def verify_k_anonymity(out: AnonymizedDb, k: int) -> tuple[bool, list[tuple[GeneralizedTransaction, int]]]:
    """Every distinct published transaction must occur at least ``k`` times."""
    counts: Counter = Counter()
    for g, members in out.groups:
        counts[g] += len(members)
    violations = [(g, c) for g, c in counts.items() if c < k]
    return not violations, violations


def total_distortion(out: AnonymizedDb, db: TransactionDb) -> Distortion:
    """Sum of GGD(group members, published transaction) over all groups."""
    by_tid = {t.tid: t for t in db}
    total = ZERO_DISTORTION
    for g, members in out.groups:
        total = total + ggd([by_tid[tid] for tid in members], g, db.taxonomy)
    return total


def format_public(out: AnonymizedDb, taxonomy: TaxonomyTree) -> str:
    labels = taxonomy.labels
    return "".join(f"{gid}\t{' '.join(labels[i] for i in g)}\n" for gid, g in out.records())


def format_audit_map(out: AnonymizedDb) -> str:
    return "".join(
        f"{tid}\t{gi + 1}\n" for gi, (_, members) in enumerate(out.groups) for tid in members
    )


def parse_public(text: str, taxonomy: TaxonomyTree) -> list[tuple[int, GeneralizedTransaction]]:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip():
            continue
        gid, _, body = raw.partition("\t")
        try:
            g = GeneralizedTransaction.of((taxonomy.item(lab) for lab in body.split()), taxonomy)
            rows.append((int(gid), g))
        except (KeyError, ValueError) as exc:
            raise DataError(f"public output line {lineno}: {exc}") from None
    return rows


def rebuild(public_text: str, audit_text: str, taxonomy: TaxonomyTree) -> AnonymizedDb:
    """Reassemble an :class:`AnonymizedDb` from the public file plus the audit map."""
    rows = parse_public(public_text, taxonomy)
    by_gid: dict[int, GeneralizedTransaction] = {}
    sizes: Counter = Counter()
    for gid, g in rows:
        if by_gid.setdefault(gid, g) != g:
            raise DataError(f"group {gid} has inconsistent records")
        sizes[gid] += 1
    members: dict[int, list[str]] = {gid: [] for gid in by_gid}
    for raw in audit_text.splitlines():
        if not raw.strip():
            continue
        tid, _, gid = raw.partition("\t")
        gid_i = int(gid)
        if gid_i not in members:
            raise DataError(f"audit map refers to unknown group {gid_i}")
        members[gid_i].append(tid)
    for gid in by_gid:
        if len(members[gid]) != sizes[gid]:
            raise DataError(f"group {gid}: audit map and public output disagree on size")
    return AnonymizedDb([(by_gid[gid], tuple(members[gid])) for gid in sorted(by_gid)])
