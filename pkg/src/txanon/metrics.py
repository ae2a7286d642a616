"""Quality indicators of an anonymization run and their serialization."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .anonymized import AnonymizedDb, total_distortion
from .taxonomy import TaxonomyTree
from .translog import TransactionDb, density

CSV_FIELDS = (
    "algorithm", "k", "r", "transactions", "distortion", "avg_len", "avg_level", "runtime_ms",
)


@dataclass
class AnonymizationReport:
    algorithm: str
    k: int
    r: int | None
    total_distortion: Fraction
    generalization_distortion: Fraction
    suppression_distortion: int
    avg_generalized_length: float
    avg_item_level: float
    avg_generalized_length_per_group: float
    avg_item_level_per_group: float
    density: Fraction
    runtime_ms: int
    cluster_size_histogram: dict[int, int]
    transaction_count: int
    taxonomy_size: int
    group_count: int
    warnings: list[str] = field(default_factory=list)


def _mean(num: float, den: float) -> float:
    return num / den if den else 0.0


def build_report(
    out: AnonymizedDb,
    db: TransactionDb,
    taxonomy: TaxonomyTree,
    runtime_ms: int = 0,
    algorithm: str = "clump",
    k: int = 0,
    r: int | None = None,
) -> AnonymizationReport:
    """Averages are per published record; per-group averages are kept as secondary fields."""
    dist = total_distortion(out, db)
    level = taxonomy.level
    n_records = len_sum = level_sum = 0
    group_len = group_level = 0.0
    for g, members in out.groups:
        size = len(members)
        g_level = sum(int(level[i]) for i in g)
        n_records += size
        len_sum += size * len(g)
        level_sum += size * g_level
        group_len += len(g)
        group_level += g_level
    n_groups = len(out.groups)
    warnings = []
    if not n_groups:
        warnings.append("empty anonymization result")
    return AnonymizationReport(
        algorithm=algorithm,
        k=k,
        r=r,
        total_distortion=dist.total,
        generalization_distortion=dist.generalization_part,
        suppression_distortion=dist.suppression_part,
        avg_generalized_length=_mean(len_sum, n_records),
        avg_item_level=_mean(level_sum, len_sum),
        avg_generalized_length_per_group=_mean(group_len, n_groups),
        avg_item_level_per_group=_mean(group_level, group_len),
        density=density(db) if len(db) else Fraction(0),
        runtime_ms=int(runtime_ms),
        cluster_size_histogram=dict(sorted(Counter(len(m) for _, m in out.groups).items())),
        transaction_count=len(db),
        taxonomy_size=len(taxonomy),
        group_count=n_groups,
        warnings=warnings,
    )


def _exact(x: Fraction) -> dict:
    return {"rational": str(x), "decimal": round(float(x), 4)}


def report_dict(rep: AnonymizationReport) -> dict:
    return {
        "algorithm": rep.algorithm,
        "k": rep.k,
        "r": rep.r,
        "transaction_count": rep.transaction_count,
        "taxonomy_size": rep.taxonomy_size,
        "group_count": rep.group_count,
        "total_distortion": _exact(rep.total_distortion),
        "generalization_distortion": _exact(rep.generalization_distortion),
        "suppression_distortion": rep.suppression_distortion,
        "avg_generalized_length": round(rep.avg_generalized_length, 4),
        "avg_item_level": round(rep.avg_item_level, 4),
        "avg_generalized_length_per_group": round(rep.avg_generalized_length_per_group, 4),
        "avg_item_level_per_group": round(rep.avg_item_level_per_group, 4),
        "density": _exact(rep.density),
        "runtime_ms": rep.runtime_ms,
        "cluster_size_histogram": {str(s): c for s, c in rep.cluster_size_histogram.items()},
        "warnings": list(rep.warnings),
    }


def write_report(rep: AnonymizationReport, target: io.TextIOBase | None = None) -> str:
    doc = json.dumps(report_dict(rep), indent=2) + "\n"
    if target is not None:
        target.write(doc)
    return doc


def csv_row(rep: AnonymizationReport) -> dict:
    return {
        "algorithm": rep.algorithm,
        "k": rep.k,
        "r": "" if rep.r is None else rep.r,
        "transactions": rep.transaction_count,
        "distortion": f"{float(rep.total_distortion):.4f}",
        "avg_len": f"{rep.avg_generalized_length:.4f}",
        "avg_level": f"{rep.avg_item_level:.4f}",
        "runtime_ms": rep.runtime_ms,
    }


def write_csv(rows: list[dict], target: io.TextIOBase, fields=CSV_FIELDS) -> None:
    w = csv.DictWriter(target, fieldnames=list(fields), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
