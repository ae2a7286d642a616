from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from txanon.anonymized import verify_k_anonymity
from txanon.oracle import is_common_generalization
from txanon.partition import partition_anonymize, partition_distortion, partition_nodes
from txanon.synth import synthetic_transactions
from txanon.taxonomy import generate_synthetic
from txanon.translog import Transaction, TransactionDb


def test_baskets_partition(baskets, food):
    out = partition_anonymize(baskets, food, 2)
    got = [(sorted(g.labels(food)), m) for g, m in out.groups]
    assert got == [(["fruit", "meat"], ("t1", "t4")), (["food"], ("t2", "t3", "t5"))]
    d = partition_distortion(out, baskets)
    assert d.total == Fraction(69, 7)
    assert d.generalization_part == Fraction(2 * 3, 7) + 3
    # t1 loses one item; t2, t3, t5 keep one of 8 between them
    assert d.suppression_part == 1 + 5


def test_whole_database_under_k_stays_at_root(baskets, food):
    out = partition_anonymize(baskets, food, 5)
    assert len(out.groups) == 1
    assert out.groups[0][0].labels(food) == ["food"]


def test_identical_sets_drill_to_leaves(food):
    db = TransactionDb([Transaction(str(i), tuple(food.items(["beef", "milk", "beef"]))) for i in range(4)], food)
    out = partition_anonymize(db, food, 2)
    assert len(out.groups) == 1
    assert sorted(out.groups[0][0].labels(food)) == ["beef", "milk"]


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**31), st.integers(0, 60))
def test_partition_invariants(k, seed, extra):
    tax = generate_synthetic(200, (2, 5), 6, seed=seed % 997)
    db = synthetic_transactions(tax, k + extra, mean_length=4, seed=seed)
    nodes = partition_nodes(db, tax, k)
    assert sorted(m for p in nodes for m in p.members) == list(range(len(db)))
    assert all(len(p.members) >= k for p in nodes)
    out = partition_anonymize(db, tax, k)
    assert verify_k_anonymity(out, k)[0]
    by_tid = {t.tid: t.items for t in db}
    for g, members in out.groups:
        # the representation covers every member's item set (duplicates ignored)
        assert is_common_generalization(g, [sorted(set(by_tid[t])) for t in members], tax)
