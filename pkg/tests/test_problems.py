"""Problem matrices, the three protocols, and the quadrant recursions."""

import pytest

from parlab.matrix import CapExceededError, ideal_region_sizes
from parlab.problems import (
    ProblemKind,
    ProtocolKind,
    build_matrix,
    build_protocol,
    certify_fooling_set,
    decode_set,
    encode_set,
    fooling_set,
    ideal_region_size,
    problem_value,
    recursive_tiling,
)
from parlab.protocol import induced_tiles, run


def test_set_encoding():
    assert encode_set({1, 2, 4}, 4) == 0b1011
    assert decode_set(0b1011, 4) == {1, 2, 4}
    assert encode_set(set(), 3) == 0
    with pytest.raises(ValueError):
        encode_set({5}, 4)
    with pytest.raises(ValueError):
        decode_set(16, 4)


def test_problem_values():
    assert problem_value(ProblemKind.DISJOINTNESS, 0b101, 0b010) == 1
    assert problem_value(ProblemKind.DISJOINTNESS, 0b101, 0b100) == 0
    assert problem_value(ProblemKind.INTERSECTION, 0b101, 0b110) == 0b100


def test_ideal_region_size_matches_matrix():
    for problem in ProblemKind:
        for k in (1, 2, 3):
            m = build_matrix(problem, k)
            sizes = ideal_region_sizes(m)
            for label, size in sizes.items():
                assert ideal_region_size(problem, k, label) == size


def test_ideal_region_size_rejects_bad_labels():
    with pytest.raises(ValueError):
        ideal_region_size(ProblemKind.DISJOINTNESS, 2, 2)
    with pytest.raises(ValueError):
        ideal_region_size(ProblemKind.INTERSECTION, 2, 4)


def test_trivial_protocol_transcripts():
    p = build_protocol(ProblemKind.DISJOINTNESS, ProtocolKind.TRIVIAL, 2)
    # player 1 announces both bits, player 2 answers disjointness; the
    # answer is skipped when it is forced (row 0 meets nothing)
    assert run(p, 0b00, 0b11).render() == "00"
    assert run(p, 0b10, 0b01).render() == "101"
    assert run(p, 0b10, 0b10).render() == "100"
    assert all(speaker == 1 for speaker, _ in run(p, 0b11, 0b00).bits[:2])


def test_one_first_protocol_speaker_order():
    p = build_protocol(ProblemKind.DISJOINTNESS, ProtocolKind.ONE_FIRST, 2)
    t = run(p, 0b11, 0b01)
    # player 2 responds only right after player 1 announces a 1
    assert [s for s, _ in t.bits] == [1, 2, 1, 2]
    assert t.outcome == 0


def test_protocol_construction_cap():
    with pytest.raises(CapExceededError):
        build_protocol(ProblemKind.DISJOINTNESS, ProtocolKind.TRIVIAL, 13)
    with pytest.raises(ValueError):
        build_protocol(ProblemKind.DISJOINTNESS, ProtocolKind.TRIVIAL, 0)


def test_recursive_matches_induced_small():
    for problem in ProblemKind:
        for protocol in ProtocolKind:
            for k in (1, 2, 3):
                m = build_matrix(problem, k)
                ind = induced_tiles(build_protocol(problem, protocol, k), m)
                rec = recursive_tiling(problem, protocol, k)
                assert {(t.rows, t.cols, t.outcome) for t in ind} == {
                    (t.rows, t.cols, t.outcome) for t in rec
                }


def test_recursive_tiling_transcripts_match_quadrants():
    # bottom-right quadrant tiles of the intersection recursions carry
    # transcripts prefixed 11
    tiles = recursive_tiling(ProblemKind.INTERSECTION, ProtocolKind.ALTERNATING, 2)
    for t in tiles:
        in_br = min(t.rows) >= 2 and min(t.cols) >= 2
        assert in_br == t.transcript.startswith("11")


def test_trivial_one_first_intersection_tilings_equal():
    for k in (1, 2, 3, 4):
        m = build_matrix(ProblemKind.INTERSECTION, k)
        a = induced_tiles(
            build_protocol(ProblemKind.INTERSECTION, ProtocolKind.TRIVIAL, k), m
        )
        b = induced_tiles(
            build_protocol(ProblemKind.INTERSECTION, ProtocolKind.ONE_FIRST, k), m
        )
        assert {(t.rows, t.cols) for t in a} == {(t.rows, t.cols) for t in b}


def test_fooling_set():
    assert fooling_set(2) == [(0, 3), (1, 2), (2, 1), (3, 0)]
    for k in range(1, 6):
        assert certify_fooling_set(k)
        assert all(x1 & x2 == 0 for x1, x2 in fooling_set(k))


def test_protocols_tile_ones_with_fooling_set_count():
    for protocol in ProtocolKind:
        for k in (1, 2, 3):
            m = build_matrix(ProblemKind.DISJOINTNESS, k)
            tiles = induced_tiles(
                build_protocol(ProblemKind.DISJOINTNESS, protocol, k), m
            )
            assert sum(1 for t in tiles if t.outcome == 1) == 2 ** k
