"""Outcome matrices, regions, rectangles, partitions, and tilings.

The outcome matrix of a two-input function is stored densely with opaque
integer labels.  Regions are explicit cell sets; rectangles are stored as
(row set, column set) pairs.  All structures are immutable after
construction and reject empty regions, since region sizes end up in the
denominators of privacy ratios.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, TextIO

Cell = tuple[int, int]

EXPLICIT_BITS_CAP = 12


class MatrixError(ValueError):
    pass


class CapExceededError(RuntimeError):
    """An operation was asked to run beyond its feasibility cap."""


@dataclass(frozen=True)
class ValueMatrix:
    """A dense outcome matrix with integer labels.

    Rows index player 1's inputs and columns player 2's, with inputs in
    increasing order from the top left.  The standard case is square with
    2^k rows, but arbitrary shapes are allowed (small auxiliary matrices
    are used by the inducibility and counterexample machinery).
    """

    n_rows: int
    n_cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n_rows < 1 or self.n_cols < 1:
            raise MatrixError("matrix must be nonempty")
        if len(self.entries) != self.n_rows or any(
            len(row) != self.n_cols for row in self.entries
        ):
            raise MatrixError("entry grid does not match declared shape")

    @classmethod
    def from_function(
        cls, n_rows: int, n_cols: int, f: Callable[[int, int], int]
    ) -> ValueMatrix:
        entries = tuple(
            tuple(f(r, c) for c in range(n_cols)) for r in range(n_rows)
        )
        return cls(n_rows, n_cols, entries)

    @classmethod
    def from_square_function(cls, k: int, f: Callable[[int, int], int]) -> ValueMatrix:
        if k < 1:
            raise MatrixError("k must be >= 1")
        if k > EXPLICIT_BITS_CAP:
            raise CapExceededError(
                f"explicit matrices are capped at k={EXPLICIT_BITS_CAP}"
            )
        n = 1 << k
        return cls.from_function(n, n, f)

    def label(self, row: int, col: int) -> int:
        return self.entries[row][col]

    def cells(self) -> Iterable[Cell]:
        for r in range(self.n_rows):
            for c in range(self.n_cols):
                yield (r, c)

    @property
    def size(self) -> int:
        return self.n_rows * self.n_cols


@dataclass(frozen=True)
class Region:
    """An arbitrary nonempty set of matrix cells."""

    cells: frozenset[Cell]

    def __post_init__(self) -> None:
        if not self.cells:
            raise MatrixError("empty region")

    @property
    def size(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class Rectangle:
    """A combinatorial rectangle: the full cross product rows x cols."""

    rows: frozenset[int]
    cols: frozenset[int]
    cells: frozenset[Cell] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.rows or not self.cols:
            raise MatrixError("empty rectangle")
        object.__setattr__(
            self,
            "cells",
            frozenset((r, c) for r in self.rows for c in self.cols),
        )

    @property
    def size(self) -> int:
        return len(self.rows) * len(self.cols)


RegionLike = Region | Rectangle


@dataclass(frozen=True)
class Partition:
    """A partition of a matrix into regions; a tiling if all regions are
    rectangles."""

    regions: tuple[RegionLike, ...]
    n_rows: int
    n_cols: int
    kind: str = "general"  # "general" | "tiling"

    def __post_init__(self) -> None:
        if self.kind not in ("general", "tiling"):
            raise MatrixError(f"unknown partition kind {self.kind!r}")
        if self.kind == "tiling" and not all(
            isinstance(r, Rectangle) for r in self.regions
        ):
            raise MatrixError("a tiling may contain only rectangles")
        total = 0
        seen: set[Cell] = set()
        for region in self.regions:
            total += region.size
            seen.update(region.cells)
        if total != self.n_rows * self.n_cols or len(seen) != total:
            raise MatrixError("regions must be disjoint and cover the matrix")

    def cell_sets(self) -> frozenset[frozenset[Cell]]:
        return frozenset(region.cells for region in self.regions)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return (
            self.n_rows == other.n_rows
            and self.n_cols == other.n_cols
            and self.cell_sets() == other.cell_sets()
        )

    def __hash__(self) -> int:
        return hash((self.n_rows, self.n_cols, self.cell_sets()))


def ideal_partition(m: ValueMatrix) -> Partition:
    """The unique partition into maximal monochromatic regions, one per
    distinct outcome label."""
    by_label: dict[int, set[Cell]] = {}
    for r in range(m.n_rows):
        row = m.entries[r]
        for c in range(m.n_cols):
            by_label.setdefault(row[c], set()).add((r, c))
    regions = tuple(
        Region(frozenset(cells)) for _, cells in sorted(by_label.items())
    )
    return Partition(regions, m.n_rows, m.n_cols, kind="general")


def ideal_region_sizes(m: ValueMatrix) -> dict[int, int]:
    """Size of the maximal monochromatic region for each label."""
    sizes: dict[int, int] = {}
    for row in m.entries:
        for label in row:
            sizes[label] = sizes.get(label, 0) + 1
    return sizes


def i_partition(region: RegionLike, i: int) -> list[Rectangle]:
    """Split a region into per-row (i=1) or per-column (i=2) rectangles."""
    if i not in (1, 2):
        raise ValueError("player must be 1 or 2")
    if isinstance(region, Rectangle):
        if i == 1:
            return [Rectangle(frozenset({r}), region.cols) for r in sorted(region.rows)]
        return [Rectangle(region.rows, frozenset({c})) for c in sorted(region.cols)]
    groups: dict[int, set[int]] = {}
    for r, c in region.cells:
        key, other = (r, c) if i == 1 else (c, r)
        groups.setdefault(key, set()).add(other)
    rects = []
    for key in sorted(groups):
        others = frozenset(groups[key])
        if i == 1:
            rects.append(Rectangle(frozenset({key}), others))
        else:
            rects.append(Rectangle(others, frozenset({key})))
    return rects


def i_refine(p: Partition, i: int) -> Partition:
    """Refine every region of a partition into its i-partition."""
    rects: list[Rectangle] = []
    for region in p.regions:
        rects.extend(i_partition(region, i))
    return Partition(tuple(rects), p.n_rows, p.n_cols, kind="tiling")


def is_monochromatic(region: RegionLike, m: ValueMatrix) -> bool:
    it = iter(region.cells)
    r0, c0 = next(it)
    label = m.label(r0, c0)
    return all(m.label(r, c) == label for r, c in it)


def region_label(region: RegionLike, m: ValueMatrix) -> int:
    """The single label of a monochromatic region."""
    r, c = next(iter(region.cells))
    label = m.label(r, c)
    if not is_monochromatic(region, m):
        raise MatrixError("region is not monochromatic")
    return label


def is_refinement(t1: Partition, t2: Partition) -> bool:
    """True iff every region of t1 lies inside some region of t2."""
    if (t1.n_rows, t1.n_cols) != (t2.n_rows, t2.n_cols):
        raise MatrixError("partitions are over different matrices")
    owner: dict[Cell, frozenset[Cell]] = {}
    for region in t2.regions:
        for cell in region.cells:
            owner[cell] = region.cells
    return all(
        region.cells <= owner[next(iter(region.cells))] for region in t1.regions
    )


# -- CSV interchange ----------------------------------------------------


def dump_matrix_csv(m: ValueMatrix, out: TextIO) -> None:
    writer = csv.writer(out)
    writer.writerow(["row", "col", "label"])
    for r in range(m.n_rows):
        for c in range(m.n_cols):
            writer.writerow([r, c, m.entries[r][c]])


def load_matrix_csv(inp: TextIO) -> ValueMatrix:
    reader = csv.DictReader(inp)
    cells: dict[Cell, int] = {}
    for rec in reader:
        cells[(int(rec["row"]), int(rec["col"]))] = int(rec["label"])
    if not cells:
        raise MatrixError("empty matrix file")
    n_rows = max(r for r, _ in cells) + 1
    n_cols = max(c for _, c in cells) + 1
    if len(cells) != n_rows * n_cols:
        raise MatrixError("matrix file does not cover a full grid")
    return ValueMatrix.from_function(n_rows, n_cols, lambda r, c: cells[(r, c)])


def dump_partition_csv(p: Partition, out: TextIO) -> None:
    writer = csv.writer(out)
    writer.writerow(["region_id", "row", "col"])
    for idx, region in enumerate(p.regions):
        for r, c in sorted(region.cells):
            writer.writerow([idx, r, c])


def load_partition_csv(inp: TextIO, n_rows: int, n_cols: int) -> Partition:
    reader = csv.DictReader(inp)
    groups: dict[int, set[Cell]] = {}
    for rec in reader:
        groups.setdefault(int(rec["region_id"]), set()).add(
            (int(rec["row"]), int(rec["col"]))
        )
    regions = tuple(Region(frozenset(cells)) for _, cells in sorted(groups.items()))
    return Partition(regions, n_rows, n_cols, kind="general")
