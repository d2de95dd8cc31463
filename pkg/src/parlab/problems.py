"""The disjointness and intersection problems and their three protocols.

Inputs encode subsets of {1..k} as k-bit strings, most significant bit
for element k (so 1011 encodes {1,2,4}).  Rows are player 1's inputs and
columns player 2's, in increasing order from the top left.

Protocols are built by running a small announcement state machine inside
the generic tree builder: while the live rectangle is not monochromatic,
the machine names the next speaker and the bit of that speaker's input
(or of the outcome) to announce; announcements that would not split the
live inputs are constant on them and are skipped.  The same tilings are
also built by pure quadrant recursion for cross-checking.
"""

from __future__ import annotations

from enum import Enum
from typing import Callable

from .matrix import CapExceededError, EXPLICIT_BITS_CAP, ValueMatrix
from .protocol import Internal, InvalidProtocolError, Leaf, Node, ProtocolTree, Tile


class ProblemKind(Enum):
    DISJOINTNESS = "disjointness"
    INTERSECTION = "intersection"


class ProtocolKind(Enum):
    TRIVIAL = "trivial"
    ONE_FIRST = "one-first"
    ALTERNATING = "alternating"


def encode_set(elements: set[int], k: int) -> int:
    """Encode a subset of {1..k}; element j is bit j-1."""
    if any(not 1 <= e <= k for e in elements):
        raise ValueError("element out of range")
    value = 0
    for e in elements:
        value |= 1 << (e - 1)
    return value


def decode_set(value: int, k: int) -> set[int]:
    if not 0 <= value < (1 << k):
        raise ValueError("encoding out of range")
    return {e for e in range(1, k + 1) if value >> (e - 1) & 1}


def problem_value(problem: ProblemKind, x1: int, x2: int) -> int:
    if problem is ProblemKind.DISJOINTNESS:
        return 1 if x1 & x2 == 0 else 0
    return x1 & x2


def build_matrix(problem: ProblemKind, k: int) -> ValueMatrix:
    return ValueMatrix.from_square_function(
        k, lambda r, c: problem_value(problem, r, c)
    )


def ideal_region_size(problem: ProblemKind, k: int, label: int) -> int:
    """Closed-form size of the maximal monochromatic region for a label;
    scales past the explicit-matrix cap."""
    if problem is ProblemKind.DISJOINTNESS:
        if label == 1:
            return 3 ** k
        if label == 0:
            return 4 ** k - 3 ** k
        raise ValueError("disjointness labels are 0 and 1")
    if not 0 <= label < (1 << k):
        raise ValueError("intersection label out of range")
    return 3 ** (k - label.bit_count())


# -- announcement state machines -----------------------------------------
#
# A state step returns (speaker, predicate over the speaker's inputs,
# transition) where transition maps the announced bit to the next state,
# or None when the machine has nothing further to announce.

_Step = tuple[int, Callable[[int], bool], Callable[[int], object]]


def _bit_pred(k: int, j: int) -> Callable[[int], bool]:
    # position j counts from the most significant bit, j = 1..k
    shift = k - j
    return lambda x, _s=shift: bool(x >> _s & 1)


def _machine(problem: ProblemKind, protocol: ProtocolKind, k: int):
    """Return (initial state, step function) for a protocol."""

    if protocol is ProtocolKind.TRIVIAL:
        # player 1 announces all k bits, then player 2 announces the
        # outcome (1 bit for disjointness, k bits for intersection)
        out_bits = 1 if problem is ProblemKind.DISJOINTNESS else k

        def step(state, rows, cols):
            phase, j = state
            if phase == "input":
                nxt = ("input", j + 1) if j < k else ("out", 1)
                return 1, _bit_pred(k, j), lambda _b, _n=nxt: _n
            if j > out_bits:
                return None
            (x1,) = rows  # all of player 1's bits have been announced
            if problem is ProblemKind.DISJOINTNESS:
                pred = lambda c, _x=x1: (_x & c) == 0
            else:
                shift = out_bits - j
                pred = lambda c, _x=x1, _s=shift: bool((_x & c) >> _s & 1)
            nxt = ("out", j + 1)
            return 2, pred, lambda _b, _n=nxt: _n

        return ("input", 1), step

    if protocol is ProtocolKind.ONE_FIRST:
        # state (j, turn): player 1 announces bit j; player 2 responds at
        # position j only after player 1 announces a 1 there

        def step(state, rows, cols):
            j, turn = state
            if j > k:
                return None
            if turn == 1:
                def nxt(b, _j=j):
                    return (_j, 2) if b else (_j + 1, 1)
                return 1, _bit_pred(k, j), nxt
            return 2, _bit_pred(k, j), lambda _b, _j=j: (_j + 1, 1)

        return (1, 1), step

    # alternating: state (j, speaker, phase); the first mover at a
    # position hands the first-mover role over whenever it announces 0,
    # and a 1 makes the other player respond at the same position

    def step(state, rows, cols):
        j, speaker, phase = state
        if j > k:
            return None
        other = 3 - speaker

        def nxt(b, _j=j, _speaker=speaker, _other=other, _phase=phase):
            if _phase == "first" and b == 1:
                return (_j, _other, "response")
            return (_j + 1, _other, "first")

        return speaker, _bit_pred(k, j), nxt

    return (1, 1, "first"), step


def _mono_label(m: ValueMatrix, rows: frozenset[int], cols: frozenset[int]) -> int | None:
    it = iter(rows)
    r0 = next(it)
    c0 = next(iter(cols))
    label = m.label(r0, c0)
    for r in rows:
        row = m.entries[r]
        for c in cols:
            if row[c] != label:
                return None
    return label


def build_protocol(problem: ProblemKind, protocol: ProtocolKind, k: int) -> ProtocolTree:
    """Build the protocol tree by running the announcement machine until
    every live rectangle is monochromatic."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > EXPLICIT_BITS_CAP:
        raise CapExceededError(
            f"explicit protocol construction is capped at k={EXPLICIT_BITS_CAP}"
        )
    m = build_matrix(problem, k)
    initial, step = _machine(problem, protocol, k)

    def build(rows: frozenset[int], cols: frozenset[int], state) -> Node:
        label = _mono_label(m, rows, cols)
        if label is not None:
            return Leaf(label)
        while True:
            result = step(state, rows, cols)
            if result is None:
                raise InvalidProtocolError(
                    "announcement machine exhausted on a non-monochromatic "
                    "rectangle"
                )
            speaker, pred, transition = result
            live = rows if speaker == 1 else cols
            one = frozenset(x for x in live if pred(x))
            if not one:
                state = transition(0)
            elif one == live:
                state = transition(1)
            else:
                break
        if speaker == 1:
            zero = build(rows - one, cols, transition(0))
            one_child = build(one, cols, transition(1))
        else:
            zero = build(rows, cols - one, transition(0))
            one_child = build(rows, one, transition(1))
        return Internal(speaker, one, zero, one_child)

    n = 1 << k
    all_inputs = frozenset(range(n))
    tree = ProtocolTree(build(all_inputs, all_inputs, initial), n, n)
    tree.validate(m)
    return tree


# -- quadrant-recursion tilings -------------------------------------------


def _shift(values: frozenset[int], offset: int) -> frozenset[int]:
    return frozenset(v + offset for v in values)


def _base_tiles(problem: ProblemKind) -> list[Tile]:
    one = 1 if problem is ProblemKind.DISJOINTNESS else 0
    both = 0 if problem is ProblemKind.DISJOINTNESS else 1
    return [
        Tile(frozenset({0}), frozenset({0, 1}), one, "0"),
        Tile(frozenset({1}), frozenset({0}), one, "10"),
        Tile(frozenset({1}), frozenset({1}), both, "11"),
    ]


def recursive_tiling(problem: ProblemKind, protocol: ProtocolKind, k: int) -> list[Tile]:
    """Build the induced tiling purely from the quadrant recursion.

    For disjointness the trivial protocol has no quadrant rule in the
    recursion family; its tiling is built directly from the per-row
    description (two tiles per nonzero row of player 1, one for row 0).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > EXPLICIT_BITS_CAP:
        raise CapExceededError(
            f"explicit tilings are capped at k={EXPLICIT_BITS_CAP}"
        )

    if problem is ProblemKind.DISJOINTNESS and protocol is ProtocolKind.TRIVIAL:
        tiles: list[Tile] = []
        n = 1 << k
        all_cols = frozenset(range(n))
        for x1 in range(n):
            bits = format(x1, f"0{k}b")
            if x1 == 0:
                tiles.append(Tile(frozenset({0}), all_cols, 1, bits))
                continue
            hit = frozenset(c for c in range(n) if x1 & c)
            tiles.append(Tile(frozenset({x1}), all_cols - hit, 1, bits + "1"))
            tiles.append(Tile(frozenset({x1}), hit, 0, bits + "0"))
        return tiles

    tiles = _base_tiles(problem)
    transpose_top = protocol is ProtocolKind.ALTERNATING
    for kk in range(1, k):
        n = 1 << kk
        nxt: list[Tile] = []
        for t in tiles:
            top_rows, top_cols = (t.cols, t.rows) if transpose_top else (t.rows, t.cols)
            nxt.append(
                Tile(
                    top_rows,
                    top_cols | _shift(top_cols, n),
                    t.outcome,
                    "0" + t.transcript,
                )
            )
            nxt.append(
                Tile(_shift(t.rows, n), t.cols, t.outcome, "10" + t.transcript)
            )
            if problem is ProblemKind.INTERSECTION:
                nxt.append(
                    Tile(
                        _shift(t.rows, n),
                        _shift(t.cols, n),
                        t.outcome + n,
                        "11" + t.transcript,
                    )
                )
        if problem is ProblemKind.DISJOINTNESS:
            bottom = frozenset(range(n, 2 * n))
            nxt.append(Tile(bottom, bottom, 0, "11"))
        tiles = nxt
    return tiles


# -- fooling set -----------------------------------------------------------


def fooling_set(k: int) -> list[tuple[int, int]]:
    """The 2^k disjointness input pairs (S, complement of S)."""
    mask = (1 << k) - 1
    return [(s, s ^ mask) for s in range(1 << k)]


def certify_fooling_set(k: int) -> bool:
    """No two fooling-set pairs can share a monochromatic rectangle: one
    of the two cross cells always has label 0."""
    pairs = fooling_set(k)
    for i, (a, b) in enumerate(pairs):
        for c, d in pairs[i + 1:]:
            if (a & d) == 0 and (c & b) == 0:
                return False
    return True
