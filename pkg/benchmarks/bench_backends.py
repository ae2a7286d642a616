"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_backends.py [--sizes 2000,5000] [--repeat 3] [--csv out.csv]

Times each kernel on the same inputs for both backends, checks that the
results agree, and reports the best of ``--repeat`` runs.  The first numba
call per signature is excluded (JIT compilation or cache load).
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

import numpy as np

from txanon import kernels
from txanon.clump import ClumpConfig, cluster
from txanon.lcg import to_csr
from txanon.synth import synthetic_transactions
from txanon.taxonomy import generate_synthetic


def best_of(fn, repeat):
    out, best = None, float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(tax, sizes, seed):
    rng = np.random.default_rng(seed)
    lengths = rng.geometric(1 / 8, size=1_000_000).astype(np.int64)
    yield "counting_sort 1e6", lambda k: k.counting_sort_desc(lengths)

    db = synthetic_transactions(tax, 4000, mean_length=10, seed=seed)
    # 2000 two-transaction problems, the shape Clump scores candidates with
    bags = [db[j] for j in range(4000)]
    tr_ptr, items = to_csr(bags)
    prob_ptr = np.arange(0, 4001, 2, dtype=np.int64)
    yield "lcg_many 2000 pairs", lambda k: k.lcg_many(tax, prob_ptr, tr_ptr, items)

    n, width = 200, int(db.lengths.max())
    lcg_buf = np.zeros((n, width), dtype=np.int64)
    lcg_len = np.zeros(n, dtype=np.int64)
    for c in range(n):
        t = np.asarray(db[c].items)
        lcg_buf[c, : t.size] = t[np.argsort(tax.rank[t], kind="stable")]
        lcg_len[c] = t.size
    cand = np.arange(10, dtype=np.int64)
    sizes_ = np.ones(n, dtype=np.int64)
    t = np.asarray(db[n].items, dtype=np.int64)
    yield "best_merge r=10 (x500)", lambda k: [
        k.best_merge(tax, lcg_buf, lcg_len, cand, sizes_, lcg_len, t) for _ in range(500)
    ]

    cfg = ClumpConfig(k=5, r=10)
    for size in sizes:
        sdb = synthetic_transactions(tax, size, seed=seed + size)
        yield f"clump |D|={size}", lambda k, sdb=sdb: cluster(sdb, tax, cfg, backend=k.NAME)


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, list):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    if hasattr(a, "members"):
        return a.members == b.members and a.lcg == b.lcg
    return a == b


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="2000,5000", help="Clump end-to-end sizes")
    p.add_argument("--leaves", type=int, default=10_000)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", help="also write results here")
    a = p.parse_args(argv)

    backends = kernels.available()
    if "numba" not in backends:
        print("numba is not installed; only the numpy backend can be timed", file=sys.stderr)
    tax = generate_synthetic(a.leaves, (2, 6), 12, seed=a.seed)
    sizes = [int(s) for s in a.sizes.split(",") if s]

    rows = []
    print(f"{'kernel':<26}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}  agree")
    for name, fn in cases(tax, sizes, a.seed):
        times, outs = {}, {}
        for b in backends:
            kern = kernels.get(b)
            fn(kern)  # warm-up: JIT compile / cache load
            times[b], outs[b] = best_of(lambda: fn(kern), a.repeat)
        agree = all(same(outs[backends[0]], outs[b]) for b in backends[1:])
        speed = times["numpy"] / times["numba"] if len(backends) == 2 else float("nan")
        print(f"{name:<26}" + "".join(f"{times[b] * 1e3:>10.1f}ms" for b in backends)
              + f"{speed:>9.1f}x  {agree}")
        rows.append({"kernel": name, **{f"{b}_ms": round(times[b] * 1e3, 3) for b in backends},
                     "speedup": round(speed, 2), "agree": agree})
    if a.csv:
        with open(a.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 0 if all(r["agree"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
