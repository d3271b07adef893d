import pytest

from partsep.partitions import (
    Partition,
    all_partitions,
    bottom,
    common_refinement,
    proper_partitions,
    top,
)

BELL_NUMBERS = {1: 1, 2: 2, 3: 5, 4: 15, 5: 52}


@pytest.mark.parametrize("n,count", sorted(BELL_NUMBERS.items()))
def test_partition_counts(n, count):
    assert len(all_partitions(n)) == count


def test_n3_canonical_order_and_rendering():
    assert [str(p) for p in all_partitions(3)] == ["1|2|3", "1|23", "12|3", "123", "13|2"]


def test_proper_partitions_excludes_only_the_trivial_one():
    props = proper_partitions(3)
    assert len(props) == 4
    assert bottom(3) in props
    assert top(3) not in props


def test_parse_render_round_trip():
    for n in range(1, 6):
        for p in all_partitions(n):
            assert Partition.parse(str(p), n) == p


def test_parse_rejects_garbage():
    for text in ("", "1|", "||", "1|1", "0|12", "1|4", "abc"):
        with pytest.raises(ValueError):
            Partition.parse(text, 3)


def test_blocks_not_covering_rejected():
    with pytest.raises(ValueError):
        Partition(((1, 2),), 3)
    with pytest.raises(ValueError):
        Partition(((1, 2), (2, 3)), 3)


def test_refines_is_partial_order():
    parts = all_partitions(4)
    for a in parts:
        assert a.refines(a)
    for a in parts:
        for b in parts:
            if a.refines(b) and b.refines(a):
                assert a == b
    for a in parts:
        for b in parts:
            for c in parts:
                if a.refines(b) and b.refines(c):
                    assert a.refines(c)


def test_bottom_refines_everything_top_refined_by_everything():
    for p in all_partitions(4):
        assert bottom(4).refines(p)
        assert p.refines(top(4))


def test_common_refinement():
    a = Partition.parse("12|34", 4)
    b = Partition.parse("13|24", 4)
    assert common_refinement(a, b) == bottom(4)
    c = Partition.parse("12|3|4", 4)
    assert common_refinement(a, c) == c
    # meet is the greatest lower bound
    m = common_refinement(a, b)
    assert m.refines(a) and m.refines(b)


def test_blocks_sorted_by_min_element():
    p = Partition.parse("13|2", 3)
    assert p.blocks == ((1, 3), (2,))
    assert str(p) == "13|2"
