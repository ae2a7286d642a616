"""Command-line front end: ``txanon {anonymize,ingest,bench,report}``.

Exit codes: 0 ok, 2 configuration error, 3 data error, 4 I/O error,
5 validation failure.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import kernels
from .anonymized import (
    AnonymizedDb,
    format_audit_map,
    format_public,
    rebuild,
    verify_k_anonymity,
)
from .clump import ClumpConfig, ConfigError, clump
from .lcg import buig_lcg
from .metrics import CSV_FIELDS, build_report, csv_row, write_csv, write_report
from .oracle import brute_force_lcg, is_common_generalization
from .partition import partition_anonymize
from .synth import synthetic_transactions
from .taxonomy import TaxonomyError, TaxonomyTree, generate_synthetic, load_taxonomy
from .translog import (
    DataError,
    TransactionDb,
    format_transactions,
    ingest_query_log,
    parse_transactions,
)

log = logging.getLogger("txanon")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_IO, EXIT_VALIDATION = 0, 2, 3, 4, 5

VALIDATE_SAMPLE = 100
# brute-force LCG is quadratic in its candidate count; above this, cross-check backends
BRUTE_FORCE_LIMIT = 5_000


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError as exc:
        raise CliError(EXIT_DATA, f"{path} is not UTF-8: {exc}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc.strerror or exc}") from None


def _taxonomy(path: str) -> TaxonomyTree:
    try:
        return load_taxonomy(_read(path))
    except TaxonomyError as exc:
        raise CliError(EXIT_DATA, f"taxonomy {path}: {exc}") from None


def _algorithm_name(algorithm: str, dedup: bool) -> str:
    if algorithm == "partition":
        return "partition"
    return "clump2" if dedup else "clump1"


def run_algorithm(
    db: TransactionDb,
    tax: TaxonomyTree,
    algorithm: str,
    k: int,
    r: int,
    dedup: bool = False,
    backend: str | None = None,
) -> tuple[AnonymizedDb, int]:
    """Run one anonymizer; the runtime covers the algorithm call only."""
    if len(db) < k:
        raise CliError(EXIT_CONFIG, f"k={k} exceeds database size {len(db)}")
    if algorithm == "partition":
        if k < 2:
            raise CliError(EXIT_CONFIG, "k must be >= 2")
        t0 = time.perf_counter()
        out = partition_anonymize(db, tax, k)
    else:
        try:
            cfg = ClumpConfig(k=k, r=r, dedup_output=dedup)
        except ConfigError as exc:
            raise CliError(EXIT_CONFIG, str(exc)) from None
        t0 = time.perf_counter()
        out, _ = clump(db, tax, cfg, backend)
    return out, round((time.perf_counter() - t0) * 1000)


def _check_group(args) -> str | None:
    g, members, tax, exact_lcg, backend = args
    if not is_common_generalization(g, members, tax):
        return f"{g.labels(tax)} does not generalize every member"
    if not exact_lcg:
        return None
    shortest = min(members, key=len)
    n_cand = math.prod(int(tax.level[i]) for i in shortest)
    expect = brute_force_lcg(members, tax) if n_cand <= BRUTE_FORCE_LIMIT else buig_lcg(members, tax, backend)
    if expect != g:
        return f"published {g.labels(tax)} but LCG is {expect.labels(tax)}"
    return None


def validate(
    out: AnonymizedDb,
    db: TransactionDb,
    tax: TaxonomyTree,
    k: int,
    exact_lcg: bool,
    seed: int = 0,
    threads: int = 1,
    backend: str | None = None,
) -> list[str]:
    """Oracle cross-check of up to 100 sampled groups; returns the problems found."""
    problems = [f"{g.labels(tax)} occurs {c} < k times" for g, c in verify_k_anonymity(out, k)[1]]
    by_tid = {t.tid: t.items for t in db}
    rng = np.random.default_rng(seed)
    n = len(out.groups)
    picked = np.sort(rng.choice(n, size=min(n, VALIDATE_SAMPLE), replace=False)) if n else []
    # the LCG is recomputed with a different kernel than the one that produced it
    other = [b for b in kernels.available() if b != kernels.get(backend).NAME] or [None]
    jobs = [
        (out.groups[gi][0], [by_tid[tid] for tid in out.groups[gi][1]], tax, exact_lcg, other[0])
        for gi in picked
    ]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(_check_group, jobs))
    problems += [f"group {int(gi) + 1}: {msg}" for gi, msg in zip(picked, results) if msg]
    return problems


def cmd_anonymize(a: argparse.Namespace) -> int:
    tax = _taxonomy(a.taxonomy)
    try:
        db = parse_transactions(_read(a.input), tax)
    except DataError as exc:
        raise CliError(EXIT_DATA, f"{a.input}: {exc}") from None
    if not len(db):
        raise CliError(EXIT_DATA, f"{a.input}: no transactions with known items")
    if db.dropped_tokens:
        log.warning("dropped %d unknown item tokens", db.dropped_tokens)

    out, runtime = run_algorithm(db, tax, a.algorithm, a.k, a.r, a.dedup_output, a.backend)
    name = _algorithm_name(a.algorithm, a.dedup_output)
    if a.validate:
        exact = a.algorithm == "clump" and not a.dedup_output
        problems = validate(out, db, tax, a.k, exact, a.seed, a.threads, a.backend)
        if problems:
            for p in problems:
                log.error("validation: %s", p)
            raise CliError(EXIT_VALIDATION, f"validation failed on {len(problems)} check(s)")

    _write(a.output, format_public(out, tax))
    if a.audit_map:
        _write(a.audit_map, format_audit_map(out))
    rep = build_report(out, db, tax, 0 if a.no_timing else runtime, name, a.k,
                       None if a.algorithm == "partition" else a.r)
    report_path = a.report
    if report_path is None and a.output not in (None, "-"):
        report_path = a.output + ".report.json"
    doc = write_report(rep)
    if report_path is None:
        sys.stderr.write(doc)
    else:
        _write(report_path, doc)
    return EXIT_OK


def cmd_ingest(a: argparse.Namespace) -> int:
    tax = _taxonomy(a.taxonomy)
    try:
        db, stats = ingest_query_log(
            _read(a.input), tax, merge_by_user=not a.no_merge, dedup_items=not a.keep_duplicates
        )
    except DataError as exc:
        raise CliError(EXIT_DATA, f"{a.input}: {exc}") from None
    _write(a.output, format_transactions(db))
    doc = json.dumps(stats.as_dict(), indent=2) + "\n"
    if a.stats:
        _write(a.stats, doc)
    else:
        sys.stderr.write(doc)
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _str_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


BENCH_ALGORITHMS = ("clump1", "clump2", "partition")


def cmd_bench(a: argparse.Namespace) -> int:
    sizes, ks, rs, algos = a.sizes, a.k, a.r, a.algorithms
    if not sizes or not ks or not rs or not algos:
        raise CliError(EXIT_CONFIG, "empty sweep")
    bad = [x for x in algos if x not in BENCH_ALGORITHMS]
    if bad:
        raise CliError(EXIT_CONFIG, f"unknown algorithm(s) {bad}; choose from {BENCH_ALGORITHMS}")
    if min(ks) < 2 or min(rs) < 1 or min(sizes) < 1:
        raise CliError(EXIT_CONFIG, "need sizes >= 1, k >= 2, r >= 1")
    if min(sizes) < max(ks):
        raise CliError(EXIT_CONFIG, f"size {min(sizes)} is smaller than k={max(ks)}")

    if a.input:
        if not a.taxonomy:
            raise CliError(EXIT_CONFIG, "--input needs --taxonomy")
        tax = _taxonomy(a.taxonomy)
        try:
            full = parse_transactions(_read(a.input), tax)
        except DataError as exc:
            raise CliError(EXIT_DATA, f"{a.input}: {exc}") from None
        if max(sizes) > len(full):
            raise CliError(EXIT_CONFIG, f"size {max(sizes)} exceeds input size {len(full)}")

        def dataset(n: int) -> TransactionDb:
            return TransactionDb(full.transactions[:n], tax)
    else:
        try:
            tax = generate_synthetic(a.leaves, seed=a.seed)
        except TaxonomyError as exc:
            raise CliError(EXIT_CONFIG, f"synthetic taxonomy: {exc}") from None

        def dataset(n: int) -> TransactionDb:
            return synthetic_transactions(tax, n, mean_length=a.mean_length, seed=a.seed)

    # first kernel call pays JIT compilation or cache load; keep it out of the timings
    warm = dataset(min(sizes))
    run_algorithm(TransactionDb(warm.transactions[: max(ks)], tax), tax, "clump", max(ks), 1, False, a.backend)

    rows = []
    for n in sizes:
        db = dataset(n)
        for k in ks:
            for algo in algos:
                for r in (rs if algo != "partition" else rs[:1]):
                    base = "partition" if algo == "partition" else "clump"
                    out, ms = run_algorithm(db, tax, base, k, r, algo == "clump2", a.backend)
                    rep = build_report(out, db, tax, 0 if a.no_timing else ms, algo, k,
                                       None if algo == "partition" else r)
                    row = csv_row(rep)
                    row["backend"] = kernels.get(a.backend).NAME
                    rows.append(row)
                    log.info("%s n=%d k=%d r=%s: %s ms", algo, n, k, row["r"], row["runtime_ms"])
    buf = io.StringIO()
    write_csv(rows, buf, CSV_FIELDS + ("backend",))
    _write(a.output, buf.getvalue())
    return EXIT_OK


def cmd_report(a: argparse.Namespace) -> int:
    tax = _taxonomy(a.taxonomy)
    try:
        db = parse_transactions(_read(a.input), tax)
        out = rebuild(_read(a.public), _read(a.audit_map), tax)
        known = {t.tid for t in db}
        missing = [tid for _, m in out.groups for tid in m if tid not in known]
        if missing:
            raise DataError(f"audit map names {len(missing)} tid(s) absent from the input, e.g. {missing[0]}")
    except DataError as exc:
        raise CliError(EXIT_DATA, str(exc)) from None
    except ValueError as exc:
        raise CliError(EXIT_DATA, f"malformed input: {exc}") from None
    rep = build_report(out, db, tax, 0, a.algorithm, a.k, a.r)
    _write(a.output, write_report(rep))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="txanon", description="k-anonymize set-valued transaction data")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def backend_arg(sp):
        sp.add_argument("--backend", choices=kernels.BACKENDS, default=None,
                        help=f"kernel backend (default: ${kernels.BACKEND_ENV} or numba if installed)")

    an = sub.add_parser("anonymize", help="anonymize a transaction file")
    an.add_argument("--input", required=True, help="transactions: 'tid<TAB>item item ...' per line")
    an.add_argument("--taxonomy", required=True, help="'child<TAB>parent' per line")
    an.add_argument("--output", default="-", help="public output (default stdout)")
    an.add_argument("--report", help="JSON report (default <output>.report.json, or stderr)")
    an.add_argument("--algorithm", choices=("clump", "partition"), default="clump")
    an.add_argument("--k", type=int, default=5)
    an.add_argument("--r", type=int, default=10)
    an.add_argument("--dedup-output", action="store_true", help="drop duplicate items (Clump2)")
    an.add_argument("--validate", action="store_true", help="oracle cross-check of sampled groups")
    an.add_argument("--seed", type=int, default=0, help="seed for the validation sample")
    an.add_argument("--audit-map", help="write the private tid -> group map here")
    an.add_argument("--threads", type=int, default=1, help="worker cap for validation")
    an.add_argument("--no-timing", action="store_true", help="report runtime_ms as 0")
    backend_arg(an)
    an.set_defaults(func=cmd_anonymize)

    ing = sub.add_parser("ingest", help="turn a query log into a transaction file")
    ing.add_argument("--input", required=True, help="AnonID<TAB>Query[<TAB>...] rows")
    ing.add_argument("--taxonomy", required=True)
    ing.add_argument("--output", default="-")
    ing.add_argument("--stats", help="ingestion stats JSON (default stderr)")
    ing.add_argument("--no-merge", action="store_true", help="one transaction per row")
    ing.add_argument("--keep-duplicates", action="store_true")
    ing.set_defaults(func=cmd_ingest)

    b = sub.add_parser("bench", help="sweep |D|, k and r; print CSV")
    b.add_argument("--sizes", type=_int_list, default=[1000, 2000, 4000])
    b.add_argument("--k", type=_int_list, default=[5])
    b.add_argument("--r", type=_int_list, default=[10])
    b.add_argument("--algorithms", type=_str_list, default=["clump1"])
    b.add_argument("--input", help="use prefixes of this transaction file instead of synthetic data")
    b.add_argument("--taxonomy")
    b.add_argument("--leaves", type=int, default=10_000, help="synthetic taxonomy size")
    b.add_argument("--mean-length", type=float, default=8.0)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--output", default="-")
    b.add_argument("--no-timing", action="store_true", help="write runtime_ms as 0")
    backend_arg(b)
    b.set_defaults(func=cmd_bench)

    rp = sub.add_parser("report", help="recompute the report from public output + audit map")
    rp.add_argument("--input", required=True)
    rp.add_argument("--taxonomy", required=True)
    rp.add_argument("--public", required=True)
    rp.add_argument("--audit-map", required=True)
    rp.add_argument("--algorithm", default="unknown")
    rp.add_argument("--k", type=int, default=0)
    rp.add_argument("--r", type=int, default=None)
    rp.add_argument("--output", default="-")
    rp.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="txanon: %(message)s")
    if getattr(args, "threads", 1) < 1:
        print("txanon: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except CliError as exc:
        print(f"txanon: {exc}", file=sys.stderr)
        return exc.code
    except ConfigError as exc:
        print(f"txanon: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, TaxonomyError) as exc:
        print(f"txanon: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"txanon: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
