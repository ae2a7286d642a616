from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from txanon.taxonomy import TaxonomyError, TaxonomyTree, generate_synthetic, load_taxonomy


def test_food_tree_shape(food):
    assert len(food) == 12
    assert food.total_leaves == 8
    assert food.labels[food.root] == "food"
    assert food.height == 3
    assert [food.labels[c] for c in food.children[food.root]] == ["fruit", "meat", "dairy"]


@pytest.mark.parametrize(
    "label, lm",
    [("food", Fraction(1)), ("fruit", Fraction(2, 7)), ("meat", Fraction(1, 7)),
     ("dairy", Fraction(2, 7)), ("beef", Fraction(0))],
)
def test_loss_metric(food, label, lm):
    assert food.lm(food.item(label)) == lm


def test_is_ancestor_is_reflexive_and_follows_paths(food):
    fruit, orange, beef = food.items(["fruit", "orange", "beef"])
    assert food.is_ancestor(fruit, orange)
    assert food.is_ancestor(orange, orange)
    assert food.is_ancestor(food.root, beef)
    assert not food.is_ancestor(orange, fruit)
    assert not food.is_ancestor(fruit, beef)


def test_labels_are_normalized(food):
    assert food.item("  Orange ") == food.item("orange")


def test_single_node_tree_root_costs_one():
    tax = TaxonomyTree(["only"], [-1])
    assert tax.total_leaves == 1
    assert tax.lm(0) == 1


def test_serialize_round_trip(food):
    again = load_taxonomy(food.serialize())
    assert again == food


def test_declaration_order_with_parent_after_child():
    text = "apple\tfruit\nfruit\tfood\nbeef\tmeat\nmeat\tfood\n"
    tax = load_taxonomy(text)
    assert tax.labels[0] == "food"
    assert [tax.labels[c] for c in tax.children[0]] == ["fruit", "meat"]


def test_comments_and_blank_lines_are_skipped():
    tax = load_taxonomy("# header\n\nb\ta\n  \nc\ta\n")
    assert len(tax) == 3


@pytest.mark.parametrize(
    "text, needle",
    [
        ("a\tb\nb\ta\n", "cycle"),
        ("a\ta\n", "cycle"),
        ("a\tr\nb\ts\n", "multiple roots"),
        ("a\tr\na\ts\n", "declared under both"),
        ("a r\n", "expected"),
        ("", "empty"),
        ("\tr\n", "empty label"),
    ],
)
def test_malformed_taxonomy(text, needle):
    with pytest.raises(TaxonomyError, match=needle):
        load_taxonomy(text)


def test_cycle_hanging_off_a_root_is_rejected():
    with pytest.raises(TaxonomyError, match="cycle"):
        load_taxonomy("a\tr\nb\tc\nc\tb\n")


def test_ancestor_table(food):
    anc = food.ancestors
    orange = food.item("orange")
    assert list(anc[orange]) == [food.root, food.item("fruit"), orange]
    assert list(anc[food.root]) == [food.root, -1, -1]


def test_rank_orders_deepest_first(food):
    order = np.argsort(food.rank)
    levels = food.level[order]
    assert np.all(np.diff(levels) <= 0)


def test_from_parents_relabels_into_preorder():
    tax = TaxonomyTree.from_parents(["leaf", "root", "mid"], [2, -1, 1])
    assert tax.labels == ("root", "mid", "leaf")
    assert list(tax.parent) == [-1, 0, 1]


def test_generate_synthetic_hits_leaf_target():
    tax = generate_synthetic(10_000, (2, 6), 12, seed=7)
    assert tax.total_leaves == 10_000
    assert tax.height <= 13


def test_generate_synthetic_is_seeded():
    assert generate_synthetic(300, seed=3) == generate_synthetic(300, seed=3)
    assert generate_synthetic(300, seed=3) != generate_synthetic(300, seed=4)


@pytest.mark.parametrize("args", [(0,), (10, (1, 3)), (10, (4, 3)), (100, (2, 3), 2)])
def test_generate_synthetic_infeasible(args):
    with pytest.raises(TaxonomyError):
        generate_synthetic(*args)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 300), st.integers(2, 4), st.integers(0, 3), st.integers(0, 10**6))
def test_synthetic_tree_invariants(leaves, lo, extra, seed):
    tax = generate_synthetic(leaves, (lo, lo + extra), 12, seed=seed)
    # exact unless the minimum fan-out forces an overshoot
    assert leaves <= tax.total_leaves <= max(leaves, leaves + lo - 2)
    n = len(tax)
    # subtree contiguity matches the parent pointers
    for v in range(1, n):
        p = int(tax.parent[v])
        assert tax.is_ancestor(p, v) and not tax.is_ancestor(v, p)
    assert int(tax.subtree_size[0]) == n
    assert all(0 <= tax.lm(v) <= 1 for v in range(n))
