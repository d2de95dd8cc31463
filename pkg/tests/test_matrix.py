"""Matrices, regions, partitions, refinements, and CSV round trips."""

import io

import pytest

from parlab.matrix import (
    CapExceededError,
    MatrixError,
    Partition,
    Rectangle,
    Region,
    ValueMatrix,
    dump_matrix_csv,
    dump_partition_csv,
    i_partition,
    i_refine,
    ideal_partition,
    ideal_region_sizes,
    is_monochromatic,
    is_refinement,
    load_matrix_csv,
    load_partition_csv,
    region_label,
)


def and_matrix():
    return ValueMatrix.from_square_function(1, lambda r, c: r & c)


def test_matrix_shape_validation():
    with pytest.raises(MatrixError):
        ValueMatrix(2, 2, ((0, 0),))
    with pytest.raises(CapExceededError):
        ValueMatrix.from_square_function(13, lambda r, c: 0)


def test_ideal_partition_and_sizes():
    m = and_matrix()
    p = ideal_partition(m)
    assert p.cell_sets() == frozenset(
        {frozenset({(0, 0), (0, 1), (1, 0)}), frozenset({(1, 1)})}
    )
    assert ideal_region_sizes(m) == {0: 3, 1: 1}


def test_rectangle_and_region_reject_empty():
    with pytest.raises(MatrixError):
        Rectangle(frozenset(), frozenset({0}))
    with pytest.raises(MatrixError):
        Region(frozenset())


def test_partition_must_cover_disjointly():
    r = Rectangle(frozenset({0}), frozenset({0, 1}))
    with pytest.raises(MatrixError):
        Partition((r,), 2, 2)
    with pytest.raises(MatrixError):
        Partition((r, r), 2, 2)


def test_i_partition_of_region():
    region = Region(frozenset({(0, 0), (0, 1), (1, 0)}))
    rows = i_partition(region, 1)
    assert [(sorted(r.rows), sorted(r.cols)) for r in rows] == [
        ([0], [0, 1]),
        ([1], [0]),
    ]
    cols = i_partition(region, 2)
    assert [(sorted(r.rows), sorted(r.cols)) for r in cols] == [
        ([0, 1], [0]),
        ([0], [1]),
    ]


def test_i_refine_is_refinement():
    m = and_matrix()
    ideal = ideal_partition(m)
    for i in (1, 2):
        refined = i_refine(ideal, i)
        assert refined.kind == "tiling"
        assert is_refinement(refined, ideal)
        assert not is_refinement(ideal, refined) or refined == ideal


def test_monochromatic_and_label():
    m = and_matrix()
    good = Rectangle(frozenset({0}), frozenset({0, 1}))
    bad = Rectangle(frozenset({0, 1}), frozenset({0, 1}))
    assert is_monochromatic(good, m)
    assert region_label(good, m) == 0
    assert not is_monochromatic(bad, m)
    with pytest.raises(MatrixError):
        region_label(bad, m)


def test_matrix_csv_round_trip():
    m = ValueMatrix.from_function(3, 2, lambda r, c: 10 * r + c)
    buf = io.StringIO()
    dump_matrix_csv(m, buf)
    buf.seek(0)
    assert load_matrix_csv(buf) == m


def test_partition_csv_round_trip():
    m = and_matrix()
    p = ideal_partition(m)
    buf = io.StringIO()
    dump_partition_csv(p, buf)
    buf.seek(0)
    assert load_partition_csv(buf, 2, 2) == p


def test_matrix_csv_rejects_holes():
    with pytest.raises(MatrixError):
        load_matrix_csv(io.StringIO("row,col,label\n0,0,1\n1,1,0\n"))
