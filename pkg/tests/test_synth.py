import numpy as np

from txanon.synth import synthetic_transactions, utility_suite
from txanon.taxonomy import generate_synthetic
from txanon.translog import density


def test_seeded_and_deduplicated():
    tax = generate_synthetic(1000, seed=1)
    a = synthetic_transactions(tax, 200, seed=4)
    b = synthetic_transactions(tax, 200, seed=4)
    assert a.transactions == b.transactions
    assert all(len(set(t.items)) == len(t.items) for t in a)
    assert all(tax.is_leaf(i) for t in a for i in t.items)


def test_mean_length_tracks_parameter():
    tax = generate_synthetic(5000, seed=1)
    db = synthetic_transactions(tax, 2000, mean_length=10, seed=0)
    assert 8 < db.lengths.mean() <= 10.5


def test_geometric_lengths_are_heavier_tailed():
    tax = generate_synthetic(5000, seed=1)
    p = synthetic_transactions(tax, 2000, mean_length=10, seed=0)
    g = synthetic_transactions(tax, 2000, mean_length=10, length_dist="geometric", seed=0)
    assert np.std(g.lengths) > 2 * np.std(p.lengths)


def test_suite_spans_target_densities():
    dens = [float(density(db)) for _, db in utility_suite(n_datasets=4, size=300)]
    assert dens == sorted(dens)
    assert 0.0008 < dens[0] and dens[-1] < 0.0035
