"""Protocol trees: execution, induced tilings, inducibility, privacy."""

import pytest
from hypothesis import given, strategies as st

from parlab.matrix import Partition, Rectangle, ValueMatrix, ideal_partition
from parlab.problems import ProblemKind, ProtocolKind, build_matrix, build_protocol
from parlab.protocol import (
    Internal,
    InvalidProtocolError,
    Leaf,
    ProtocolTree,
    induced_tiles,
    induced_tiling,
    is_inducible,
    perfect_privacy,
    protocol_from_json,
    protocol_to_json,
    run,
    tiling_from_tiles,
)


def and_tree():
    # player 1 says whether x1 = 1; if so player 2 says whether x2 = 1
    return ProtocolTree(
        Internal(
            1,
            frozenset({1}),
            Leaf(0),
            Internal(2, frozenset({1}), Leaf(0), Leaf(1)),
        ),
        2,
        2,
    )


def test_run_transcripts():
    p = and_tree()
    assert run(p, 0, 1).bits == ((1, 0),)
    assert run(p, 0, 1).outcome == 0
    t = run(p, 1, 1)
    assert t.bits == ((1, 1), (2, 1))
    assert t.outcome == 1
    assert t.render() == "11"


def test_run_rejects_out_of_range():
    with pytest.raises(ValueError):
        run(and_tree(), 2, 0)


def test_alternating_transcript_example():
    # k=2, both inputs encode {1}: bit 2 is 0 (role swap), then player 2
    # leads bit 1 with a 1 and player 1 responds
    p = build_protocol(ProblemKind.DISJOINTNESS, ProtocolKind.ALTERNATING, 2)
    t = run(p, 0b01, 0b01)
    assert t.bits == ((1, 0), (2, 1), (1, 1))
    assert t.outcome == 0


def test_induced_tiles_cover_and_label():
    m = ValueMatrix.from_square_function(1, lambda r, c: r & c)
    tiles = induced_tiles(and_tree(), m)
    assert sum(t.size for t in tiles) == 4
    by_transcript = {t.transcript: t for t in tiles}
    assert set(by_transcript) == {"0", "10", "11"}
    assert by_transcript["11"].outcome == 1


def test_validate_catches_non_monochromatic_leaf():
    bad = ProtocolTree(Leaf(0), 2, 2)
    m = ValueMatrix.from_square_function(1, lambda r, c: r & c)
    with pytest.raises(InvalidProtocolError):
        bad.validate(m)
    with pytest.raises(InvalidProtocolError):
        induced_tiles(bad, m)


def test_validate_catches_non_splitting_node():
    tree = ProtocolTree(
        Internal(1, frozenset({0, 1}), Leaf(0), Leaf(0)), 2, 2
    )
    m = ValueMatrix.from_function(2, 2, lambda r, c: 0)
    with pytest.raises(InvalidProtocolError):
        tree.validate(m)


PINWHEEL = Partition(
    (
        Rectangle(frozenset({0}), frozenset({0, 1})),
        Rectangle(frozenset({0, 1}), frozenset({2})),
        Rectangle(frozenset({1, 2}), frozenset({0})),
        Rectangle(frozenset({2}), frozenset({1, 2})),
        Rectangle(frozenset({1}), frozenset({1})),
    ),
    3,
    3,
    kind="tiling",
)


def test_pinwheel_not_inducible():
    constant = ValueMatrix.from_function(3, 3, lambda r, c: 0)
    assert not is_inducible(PINWHEEL, constant)


def test_induced_tilings_are_inducible():
    for problem in ProblemKind:
        for protocol in ProtocolKind:
            m = build_matrix(problem, 3)
            tiles = induced_tiles(build_protocol(problem, protocol, 3), m)
            assert is_inducible(tiling_from_tiles(tiles, m.n_rows, m.n_cols), m)


def test_perfect_privacy_modes():
    # the AND tree shows player 1 nothing beyond the outcome, but it
    # hands x1 to player 2 and the transcript to everyone
    m = ValueMatrix.from_square_function(1, lambda r, c: r & c)
    p = and_tree()
    assert not perfect_privacy(p, m, "objective")
    assert perfect_privacy(p, m, "wrt1")
    assert not perfect_privacy(p, m, "wrt2")
    assert not perfect_privacy(p, m, "subjective")


def test_json_round_trip():
    p = build_protocol(ProblemKind.INTERSECTION, ProtocolKind.ALTERNATING, 2)
    text = protocol_to_json(p)
    q = protocol_from_json(text, p.n_rows, p.n_cols)
    m = build_matrix(ProblemKind.INTERSECTION, 2)
    assert induced_tiling(q, m) == induced_tiling(p, m)


@given(
    st.sampled_from(list(ProblemKind)),
    st.sampled_from(list(ProtocolKind)),
    st.integers(min_value=1, max_value=4),
    st.data(),
)
def test_transcript_locates_tile(problem, protocol, k, data):
    """Every execution lands in the induced tile carrying its transcript."""
    n = 1 << k
    x1 = data.draw(st.integers(min_value=0, max_value=n - 1))
    x2 = data.draw(st.integers(min_value=0, max_value=n - 1))
    m = build_matrix(problem, k)
    p = build_protocol(problem, protocol, k)
    t = run(p, x1, x2)
    tile = next(
        tl for tl in induced_tiles(p, m) if x1 in tl.rows and x2 in tl.cols
    )
    assert tile.transcript == t.render()
    assert tile.outcome == t.outcome == m.label(x1, x2)
