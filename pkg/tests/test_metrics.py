import io
import json
from fractions import Fraction

import pytest

from txanon.anonymized import (
    AnonymizedDb,
    format_audit_map,
    format_public,
    parse_public,
    rebuild,
    verify_k_anonymity,
)
from txanon.clump import ClumpConfig, clump
from txanon.lcg import GeneralizedTransaction
from txanon.metrics import CSV_FIELDS, build_report, csv_row, write_csv, write_report
from txanon.partition import partition_anonymize
from txanon.translog import DataError


@pytest.fixture
def clump_out(baskets, food):
    return clump(baskets, food, ClumpConfig(k=2, r=2))[0]


def test_report_on_baskets(clump_out, baskets, food):
    rep = build_report(clump_out, baskets, food, runtime_ms=3, algorithm="clump1", k=2, r=2)
    assert rep.total_distortion == Fraction(46, 7)
    assert rep.suppression_distortion == 1
    assert rep.generalization_distortion == Fraction(39, 7)
    # records: 2 x 3 items + 3 x 2 items
    assert rep.avg_generalized_length == pytest.approx(12 / 5)
    # levels: beef 3, fruit 2, food 1 (x2 records); chicken 3, food 1 (x3 records)
    assert rep.avg_item_level == pytest.approx((2 * 6 + 3 * 4) / 12)
    assert rep.avg_generalized_length_per_group == pytest.approx(2.5)
    assert rep.avg_item_level_per_group == pytest.approx(10 / 5)
    assert rep.cluster_size_histogram == {2: 1, 3: 1}
    assert rep.density == Fraction(13, 40)
    assert rep.group_count == 2 and rep.transaction_count == 5 and rep.taxonomy_size == 12


def test_partition_report(baskets, food):
    out = partition_anonymize(baskets, food, 2)
    rep = build_report(out, baskets, food, algorithm="partition", k=2)
    assert rep.total_distortion == Fraction(69, 7)


def test_report_json_keeps_exact_values(clump_out, baskets, food):
    doc = json.loads(write_report(build_report(clump_out, baskets, food)))
    assert doc["total_distortion"] == {"rational": "46/7", "decimal": 6.5714}
    assert doc["cluster_size_histogram"] == {"2": 1, "3": 1}


def test_empty_result_warns(baskets, food):
    rep = build_report(AnonymizedDb([]), baskets, food)
    assert rep.warnings and rep.avg_item_level == 0.0


def test_csv_row(clump_out, baskets, food):
    buf = io.StringIO()
    rep = build_report(clump_out, baskets, food, runtime_ms=7, algorithm="clump1", k=2, r=2)
    write_csv([csv_row(rep)], buf)
    header, row = buf.getvalue().splitlines()
    assert header.split(",") == list(CSV_FIELDS)
    assert row == "clump1,2,2,5,6.5714,2.4000,2.0000,7"


def test_public_output_has_no_tids(clump_out, food):
    text = format_public(clump_out, food)
    assert text == "1\tbeef fruit food\n1\tbeef fruit food\n2\tchicken food\n2\tchicken food\n2\tchicken food\n"
    assert "t1" not in text


def test_rebuild_round_trip(clump_out, food):
    again = rebuild(format_public(clump_out, food), format_audit_map(clump_out), food)
    assert again == clump_out


def test_rebuild_rejects_mismatch(clump_out, food):
    with pytest.raises(DataError):
        rebuild(format_public(clump_out, food), "t1\t1\n", food)
    with pytest.raises(DataError):
        rebuild(format_public(clump_out, food), "t1\t9\n", food)
    with pytest.raises(DataError):
        parse_public("1\tbeef tofu\n", food)


def test_k_anonymity_counts_across_groups(food):
    g = GeneralizedTransaction((food.root,))
    out = AnonymizedDb([(g, ("a",)), (g, ("b",))])
    assert verify_k_anonymity(out, 2) == (True, [])
    ok, bad = verify_k_anonymity(out, 3)
    assert not ok and bad == [(g, 2)]


def test_audit_map(clump_out):
    assert clump_out.audit_map() == {"t1": 0, "t2": 0, "t3": 1, "t4": 1, "t5": 1}
