import itertools

import pytest

from partsep.labels import (
    ClassLabel,
    class_empty_by_construction,
    enumerate_proper_labels,
    enumerate_ps_classes,
    is_proper,
    label_leq,
    lattice_json,
    properize,
    render_label,
    top_label,
    tripartite_class_name,
)
from partsep.partitions import Partition, all_partitions, proper_partitions, top


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 9), (4, 346)])
def test_proper_label_counts(n, count):
    assert len(enumerate_proper_labels(n)) == count


def test_proper_labels_are_nonempty_antichains():
    for label in enumerate_proper_labels(3):
        assert label
        assert is_proper(label)
        for a, b in itertools.combinations(label, 2):
            assert not a.refines(b) and not b.refines(a)


def test_label_order_on_singletons_matches_refinement():
    parts = [p for p in all_partitions(3) if p != Partition.parse("1|2|3", 3)]
    for a in parts:
        for b in parts:
            assert label_leq(frozenset({a}), frozenset({b})) == a.refines(b)


def test_label_leq_is_partial_order_n3():
    labels = enumerate_proper_labels(3)
    for a in labels:
        assert label_leq(a, a)
    for a in labels:
        for b in labels:
            if label_leq(a, b) and label_leq(b, a):
                assert a == b
    for a in labels:
        for b in labels:
            for c in labels:
                if label_leq(a, b) and label_leq(b, c):
                    assert label_leq(a, c)


def test_top_label_is_maximum():
    for label in enumerate_proper_labels(3):
        assert label_leq(label, top_label(3))


def test_properize_keeps_maximal_members():
    p1 = Partition.parse("1|23", 3)
    both = properize({p1, top(3)})
    # the trivial partition dominates, and non-maximal members drop out
    assert both == frozenset({top(3)})
    splits = {p for p in proper_partitions(3) if p.num_blocks == 2}
    assert properize(splits) == frozenset(splits)
    assert properize(set(proper_partitions(3))) == frozenset(splits)


@pytest.mark.parametrize("pss,count", [(False, 20), (True, 21)])
def test_class_counts(pss, count):
    assert len(list(enumerate_ps_classes(3, pss_extension=pss))) == count


def test_class_names_cover_expected_set():
    names = {tripartite_class_name(c) for c in enumerate_ps_classes(3)}
    expected = {"C3", "C2.8", "C2.4", "C2.1", "C1"}
    for a in (1, 2, 3):
        expected |= {f"C2.7.{a}", f"C2.6.{a}", f"C2.5.{a}", f"C2.3.{a}", f"C2.2.{a}"}
    assert names == expected


def test_pss_extension_splits_top_class():
    names = {tripartite_class_name(c) for c in enumerate_ps_classes(3, pss_extension=True)}
    assert "C1" not in names
    assert {"CW", "CGHZ"} <= names


def test_included_up_closed_excluded_down_closed():
    labels = enumerate_proper_labels(3)
    for cls in enumerate_ps_classes(3):
        for a in cls.included:
            for b in labels:
                if label_leq(a, b):
                    assert b in cls.included
        for a in cls.excluded:
            for b in labels:
                if label_leq(b, a):
                    assert b in cls.excluded


def test_class_label_validation():
    labels = frozenset(enumerate_proper_labels(3))
    with pytest.raises(ValueError):
        ClassLabel(3, frozenset(), labels)  # top missing from included
    some = next(iter(labels))
    with pytest.raises(ValueError):
        ClassLabel(3, labels, frozenset({some}))  # not disjoint


def test_empty_by_construction_detects_order_violation():
    labels = enumerate_proper_labels(3)
    bot = frozenset({Partition.parse("1|2|3", 3)})
    # fully separable states exist inside every larger subset, so including
    # the bottom label while excluding anything above it names an empty set
    included = frozenset({bot, top_label(3)})
    excluded = frozenset(labels) - included
    cls = ClassLabel(3, included, excluded)
    assert class_empty_by_construction(cls)
    for cls in enumerate_ps_classes(3):
        assert not class_empty_by_construction(cls)


def test_lattice_json_shape():
    data = lattice_json(3, pss_extension=True)
    assert data["n"] == 3
    assert len(data["nodes"]) == 9
    assert len(data["classes"]) == 21
    # covering edges never skip levels: no edge is implied by two others
    idx_pairs = {tuple(e) for e in data["edges"]}
    for lo, hi in idx_pairs:
        for mid in range(len(data["nodes"])):
            assert not ((lo, mid) in idx_pairs and (mid, hi) in idx_pairs)


def test_render_label_sorted():
    label = frozenset({Partition.parse("12|3", 3), Partition.parse("1|23", 3)})
    assert render_label(label) == "{1|23,12|3}"
