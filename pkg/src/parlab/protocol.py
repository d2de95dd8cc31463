"""Deterministic two-party protocols as binary decision trees.

An internal node names the speaker and the set of that speaker's live
inputs for which the transmitted bit is 1; a leaf carries the outcome
label.  Execution, induced tilings, perfect-privacy checks, and the
protocol-inducibility decision procedure all live here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

from .matrix import (
    MatrixError,
    Partition,
    Rectangle,
    ValueMatrix,
    i_refine,
    ideal_partition,
    is_monochromatic,
    region_label,
)


class InvalidProtocolError(ValueError):
    pass


@dataclass(frozen=True)
class Leaf:
    outcome: int


@dataclass(frozen=True)
class Internal:
    speaker: int  # 1 or 2
    one_set: frozenset[int]
    zero: Node
    one: Node


Node = Union[Leaf, Internal]


@dataclass(frozen=True)
class Transcript:
    bits: tuple[tuple[int, int], ...]  # (speaker, bit)
    outcome: int

    def render(self) -> str:
        return "".join(str(b) for _, b in self.bits)


@dataclass(frozen=True)
class Tile:
    """A leaf rectangle of a protocol together with its transcript."""

    rows: frozenset[int]
    cols: frozenset[int]
    outcome: int
    transcript: str

    @property
    def size(self) -> int:
        return len(self.rows) * len(self.cols)

    def rectangle(self) -> Rectangle:
        return Rectangle(self.rows, self.cols)


@dataclass(frozen=True)
class ProtocolTree:
    """A deterministic protocol over row inputs 0..n_rows-1 and column
    inputs 0..n_cols-1."""

    root: Node
    n_rows: int
    n_cols: int

    def validate(self, m: ValueMatrix) -> None:
        """Check the structural invariants against a target matrix.

        Every internal node must split its speaker's live inputs into two
        nonempty parts, and every leaf rectangle must be monochromatic
        with the leaf's label.
        """
        if (m.n_rows, m.n_cols) != (self.n_rows, self.n_cols):
            raise InvalidProtocolError("protocol shape does not match matrix")

        def walk(node: Node, rows: frozenset[int], cols: frozenset[int]) -> None:
            if isinstance(node, Leaf):
                for r in rows:
                    for c in cols:
                        if m.label(r, c) != node.outcome:
                            raise InvalidProtocolError(
                                f"leaf rectangle not monochromatic at ({r},{c})"
                            )
                return
            live = rows if node.speaker == 1 else cols
            if not node.one_set or not node.one_set < live:
                raise InvalidProtocolError(
                    "internal node must split its live inputs into two "
                    "nonempty parts"
                )
            zero_live = live - node.one_set
            if node.speaker == 1:
                walk(node.zero, zero_live, cols)
                walk(node.one, node.one_set, cols)
            else:
                walk(node.zero, rows, zero_live)
                walk(node.one, rows, node.one_set)

        walk(self.root, frozenset(range(self.n_rows)), frozenset(range(self.n_cols)))


def run(p: ProtocolTree, x1: int, x2: int) -> Transcript:
    """Execute the protocol on an input pair."""
    if not (0 <= x1 < p.n_rows and 0 <= x2 < p.n_cols):
        raise ValueError("input out of range")
    bits: list[tuple[int, int]] = []
    node = p.root
    while isinstance(node, Internal):
        x = x1 if node.speaker == 1 else x2
        bit = 1 if x in node.one_set else 0
        bits.append((node.speaker, bit))
        node = node.one if bit else node.zero
    return Transcript(tuple(bits), node.outcome)


def induced_tiles(p: ProtocolTree, m: ValueMatrix) -> list[Tile]:
    """One tile per reachable leaf, labeled with its transcript."""
    tiles: list[Tile] = []

    def walk(node: Node, rows: frozenset[int], cols: frozenset[int], tr: str) -> None:
        if isinstance(node, Leaf):
            rect = Rectangle(rows, cols)
            if not is_monochromatic(rect, m) or region_label(rect, m) != node.outcome:
                raise InvalidProtocolError(
                    f"leaf with transcript {tr!r} is not monochromatic with "
                    f"label {node.outcome}"
                )
            tiles.append(Tile(rows, cols, node.outcome, tr))
            return
        live = rows if node.speaker == 1 else cols
        if not node.one_set or not node.one_set < live:
            raise InvalidProtocolError("internal node does not split its live inputs")
        zero_live = live - node.one_set
        if node.speaker == 1:
            walk(node.zero, zero_live, cols, tr + "0")
            walk(node.one, node.one_set, cols, tr + "1")
        else:
            walk(node.zero, rows, zero_live, tr + "0")
            walk(node.one, rows, node.one_set, tr + "1")

    walk(p.root, frozenset(range(p.n_rows)), frozenset(range(p.n_cols)), "")
    return tiles


def tiling_from_tiles(tiles: list[Tile], n_rows: int, n_cols: int) -> Partition:
    rects = tuple(t.rectangle() for t in tiles)
    return Partition(rects, n_rows, n_cols, kind="tiling")


def induced_tiling(p: ProtocolTree, m: ValueMatrix) -> Partition:
    return tiling_from_tiles(induced_tiles(p, m), m.n_rows, m.n_cols)


def induced_i_tiling(p: ProtocolTree, m: ValueMatrix, i: int) -> Partition:
    return i_refine(induced_tiling(p, m), i)


def is_inducible(t: Partition, m: ValueMatrix) -> bool:
    """Decide whether a monochromatic tiling arises from some protocol.

    A live block with more than one tile must admit a bipartition of its
    rows or its columns that cuts no tile; grouping connected components
    (rows or columns linked whenever a tile spans both) and recursing
    decides this, since component splits never merge tiles.
    """
    if t.kind != "tiling":
        raise MatrixError("inducibility is defined for tilings only")
    rects = list(t.regions)
    for rect in rects:
        if not is_monochromatic(rect, m):
            raise MatrixError("tiling is not monochromatic")

    def components(items: list[frozenset[int]]) -> list[set[int]]:
        # union-find over the index sets spanned by each tile
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for group in items:
            for x in group:
                parent.setdefault(x, x)
        for group in items:
            it = iter(group)
            first = find(next(it))
            for x in it:
                parent[find(x)] = first
        comps: dict[int, set[int]] = {}
        for x in parent:
            comps.setdefault(find(x), set()).add(x)
        return list(comps.values())

    def splittable(block: list[Rectangle]) -> bool:
        if len(block) <= 1:
            return True
        for axis in ("rows", "cols"):
            groups = [getattr(r, axis) for r in block]
            comps = components(groups)
            if len(comps) > 1:
                # split off the first component; any component grouping works
                chosen = comps[0]
                inside = [r for r in block if getattr(r, axis) <= chosen]
                outside = [r for r in block if not getattr(r, axis) <= chosen]
                return splittable(inside) and splittable(outside)
        return False

    return splittable(rects)


PRIVACY_MODES = ("objective", "wrt1", "wrt2", "subjective")


def perfect_privacy(p: ProtocolTree, m: ValueMatrix, mode: str) -> bool:
    """Whether the induced tiling matches the ideal partition, possibly
    after per-player refinement."""
    if mode not in PRIVACY_MODES:
        raise ValueError(f"unknown privacy mode {mode!r}")
    induced = induced_tiling(p, m)
    ideal = ideal_partition(m)
    if mode == "objective":
        return induced == ideal
    if mode == "wrt1":
        return i_refine(induced, 1) == i_refine(ideal, 1)
    if mode == "wrt2":
        return i_refine(induced, 2) == i_refine(ideal, 2)
    return perfect_privacy(p, m, "wrt1") and perfect_privacy(p, m, "wrt2")


# -- JSON interchange -----------------------------------------------------


def node_to_obj(node: Node) -> dict:
    if isinstance(node, Leaf):
        return {"outcome": node.outcome}
    return {
        "speaker": node.speaker,
        "one_set": sorted(node.one_set),
        "zero": node_to_obj(node.zero),
        "one": node_to_obj(node.one),
    }


def node_from_obj(obj: dict) -> Node:
    if "outcome" in obj:
        return Leaf(int(obj["outcome"]))
    return Internal(
        speaker=int(obj["speaker"]),
        one_set=frozenset(int(x) for x in obj["one_set"]),
        zero=node_from_obj(obj["zero"]),
        one=node_from_obj(obj["one"]),
    )


def protocol_to_json(p: ProtocolTree) -> str:
    return json.dumps(node_to_obj(p.root))


def protocol_from_json(text: str, n_rows: int, n_cols: int) -> ProtocolTree:
    return ProtocolTree(node_from_obj(json.loads(text)), n_rows, n_cols)
