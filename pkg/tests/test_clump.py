from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from txanon.anonymized import total_distortion, verify_k_anonymity
from txanon.clump import ClumpConfig, ConfigError, anonymize, clump, cluster
from txanon.lcg import buig_lcg, ggd
from txanon.synth import synthetic_transactions
from txanon.taxonomy import generate_synthetic
from txanon.translog import DataError, Transaction, TransactionDb


def groups_by_label(out, tax):
    return [(sorted(g.labels(tax)), members) for g, members in out.groups]


def test_baskets_clusters(baskets, food, backend):
    out, clusters = clump(baskets, food, ClumpConfig(k=2, r=2), backend)
    assert groups_by_label(out, food) == [
        (["beef", "food", "fruit"], ("t1", "t2")),
        (["chicken", "food"], ("t3", "t4", "t5")),
    ]
    assert total_distortion(out, baskets).total == Fraction(46, 7)
    assert sum((cl.distortion.total for cl in clusters), Fraction(0)) == Fraction(46, 7)


def test_baskets_candidate_costs(baskets, food):
    seen = {}
    cluster(baskets, food, ClumpConfig(k=2, r=2), trace=lambda j, c: seen.setdefault(baskets[j].tid, c))
    assert [cost for _, cost in seen["t2"]] == [Fraction(18, 7), Fraction(20, 7)]
    assert [cost for _, cost in seen["t5"]] == [Fraction(5), Fraction(4)]


def test_cluster_distortion_matches_recomputed_ggd(baskets, food):
    for cl in cluster(baskets, food, ClumpConfig(k=2, r=2)):
        members = [baskets[m] for m in cl.members]
        assert cl.lcg == buig_lcg(members, food)
        assert cl.distortion == ggd(members, cl.lcg, food)


def test_dedup_output(baskets, food):
    cfg = ClumpConfig(k=2, r=2, dedup_output=True)
    out, _ = clump(baskets, food, cfg)
    assert sorted(out.groups[0][0].labels(food)) == ["beef", "food", "fruit"]
    ok, _ = verify_k_anonymity(out, 2)
    assert ok


def test_k_larger_than_database(baskets, food):
    with pytest.raises(DataError, match="exceeds"):
        clump(baskets, food, ClumpConfig(k=100))


@pytest.mark.parametrize("kw", [dict(k=1), dict(k=0), dict(r=0)])
def test_bad_config(kw):
    with pytest.raises(ConfigError):
        ClumpConfig(**kw)


def test_single_cluster_takes_everything(baskets, food):
    out, clusters = clump(baskets, food, ClumpConfig(k=3, r=1))
    assert len(clusters) == 1
    assert len(out.groups[0][1]) == 5


def test_identical_transactions_cost_nothing(food):
    db = TransactionDb([Transaction(f"u{i}", tuple(food.items(["beef", "milk"]))) for i in range(6)], food)
    out, _ = clump(db, food, ClumpConfig(k=3))
    assert total_distortion(out, db).total == 0


def test_backends_produce_identical_output():
    tax = generate_synthetic(2000, (2, 6), 8, seed=1)
    db = synthetic_transactions(tax, 400, mean_length=6, seed=2)
    a, _ = clump(db, tax, ClumpConfig(k=5), "numba")
    b, _ = clump(db, tax, ClumpConfig(k=5), "numpy")
    assert a == b


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 9), st.integers(1, 12), st.integers(0, 2**31), st.integers(0, 80))
def test_clump_structure(k, r, seed, extra):
    tax = generate_synthetic(300, (2, 5), 6, seed=seed % 1000)
    db = synthetic_transactions(tax, k + extra, mean_length=4, seed=seed)
    cfg = ClumpConfig(k=k, r=r)
    clusters = cluster(db, tax, cfg)
    assert len(clusters) == len(db) // k
    assert sorted(m for cl in clusters for m in cl.members) == list(range(len(db)))
    for cl in clusters:
        assert k <= len(cl) <= 2 * k - 1
        assert len(cl.lcg) == min(len(db[m]) for m in cl.members)
    out = anonymize(clusters, db, cfg)
    assert verify_k_anonymity(out, k)[0]
    assert total_distortion(out, db) == sum(
        (cl.distortion for cl in clusters[1:]), clusters[0].distortion
    )


def test_groups_ordered_by_earliest_member(food):
    tax = generate_synthetic(500, seed=5)
    db = synthetic_transactions(tax, 60, seed=5)
    out, _ = clump(db, tax, ClumpConfig(k=4))
    pos = {t.tid: i for i, t in enumerate(db)}
    firsts = [min(pos[t] for t in m) for _, m in out.groups]
    assert firsts == sorted(firsts)
    assert all(list(m) == sorted(m, key=pos.get) for _, m in out.groups)


def test_seed_positions_follow_length_order():
    # seeds are the 1st, (k+1)-th, ... longest transactions
    tax = generate_synthetic(200, seed=9)
    db = synthetic_transactions(tax, 30, mean_length=5, seed=9)
    clusters = cluster(db, tax, ClumpConfig(k=3))
    order = np.argsort(-db.lengths, kind="stable")
    assert [cl.members[0] for cl in clusters] == [int(order[i * 3]) for i in range(10)]
