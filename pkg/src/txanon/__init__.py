"""k-anonymization of set-valued transaction data over an item taxonomy."""

from .anonymized import AnonymizedDb, total_distortion, verify_k_anonymity
from .clump import ClumpConfig, ConfigError, clump
from .lcg import Distortion, GeneralizedTransaction, buig_lcg, ggd, incremental_lcg
from .metrics import AnonymizationReport, build_report
from .partition import partition_anonymize
from .taxonomy import TaxonomyError, TaxonomyTree, generate_synthetic, load_taxonomy
from .translog import (
    DataError,
    Transaction,
    TransactionDb,
    density,
    ingest_query_log,
    parse_transactions,
)

__version__ = "0.1.0"

__all__ = [
    "AnonymizationReport",
    "AnonymizedDb",
    "ClumpConfig",
    "ConfigError",
    "DataError",
    "Distortion",
    "GeneralizedTransaction",
    "TaxonomyError",
    "TaxonomyTree",
    "Transaction",
    "TransactionDb",
    "build_report",
    "buig_lcg",
    "clump",
    "density",
    "generate_synthetic",
    "ggd",
    "incremental_lcg",
    "ingest_query_log",
    "load_taxonomy",
    "parse_transactions",
    "partition_anonymize",
    "total_distortion",
    "verify_k_anonymity",
]
