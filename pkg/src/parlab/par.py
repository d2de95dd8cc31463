"""Privacy-approximation-ratio computations.

Worst-case and average-case PARs (objective, with respect to a player,
and subjective), subjective-PAR ratios, generalized g-based PARs, and the
exact minimization over all protocol-inducible tilings.  All arithmetic
is exact rational; no floating point enters any ratio.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

from .matrix import (
    CapExceededError,
    Cell,
    MatrixError,
    ValueMatrix,
    ideal_region_sizes,
)
from .protocol import Tile

SCOPES = ("objective", "wrt1", "wrt2", "subjective")

OPTIMAL_DP_BITS_CAP = 3


class DistributionError(ValueError):
    pass


class GValueError(ArithmeticError):
    """A g-measure came out nonpositive where a PAR denominator needs it."""


@dataclass(frozen=True)
class Distribution:
    """An exact probability table over matrix cells."""

    n_rows: int
    n_cols: int
    kind: str  # "uniform" | "explicit"
    weights: dict[Cell, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind == "explicit":
            total = sum(self.weights.values(), Fraction(0))
            if total != 1:
                raise DistributionError(f"weights sum to {total}, not 1")
            if any(w < 0 for w in self.weights.values()):
                raise DistributionError("negative weight")
        elif self.kind != "uniform":
            raise DistributionError(f"unknown distribution kind {self.kind!r}")

    @classmethod
    def uniform(cls, n_rows: int, n_cols: int) -> Distribution:
        return cls(n_rows, n_cols, "uniform")

    @classmethod
    def explicit(
        cls, n_rows: int, n_cols: int, weights: dict[Cell, Fraction]
    ) -> Distribution:
        return cls(n_rows, n_cols, "explicit", dict(weights))

    def weight(self, cell: Cell) -> Fraction:
        if self.kind == "uniform":
            return Fraction(1, self.n_rows * self.n_cols)
        return self.weights.get(cell, Fraction(0))

    def support(self) -> Iterable[Cell]:
        if self.kind == "uniform":
            for r in range(self.n_rows):
                for c in range(self.n_cols):
                    yield (r, c)
        else:
            yield from (cell for cell, w in self.weights.items() if w)

    def mass(self, cells: Iterable[Cell]) -> Fraction:
        if self.kind == "uniform":
            n = sum(1 for _ in cells)
            return Fraction(n, self.n_rows * self.n_cols)
        return sum((self.weights.get(c, Fraction(0)) for c in cells), Fraction(0))


# -- per-cell size tables ---------------------------------------------------


def _ideal_sizes_by_cell(m: ValueMatrix, scope: str) -> Callable[[Cell], int]:
    """|R^I(x)| for the objective scope, |R_i^I(x)| for wrt-i scopes."""
    if scope == "objective":
        sizes = ideal_region_sizes(m)
        return lambda cell: sizes[m.label(cell[0], cell[1])]
    if scope == "wrt1":
        counts = [Counter(row) for row in m.entries]
        return lambda cell: counts[cell[0]][m.label(cell[0], cell[1])]
    if scope == "wrt2":
        counts = [
            Counter(m.entries[r][c] for r in range(m.n_rows))
            for c in range(m.n_cols)
        ]
        return lambda cell: counts[cell[1]][m.label(cell[0], cell[1])]
    raise ValueError(f"unknown scope {scope!r}")


def _tile_sizes_by_cell(tiles: list[Tile], scope: str) -> dict[Cell, int]:
    """|R^P(x)| (or its i-refined size) for every cell."""
    out: dict[Cell, int] = {}
    for t in tiles:
        if scope == "objective":
            size = t.size
        elif scope == "wrt1":
            size = len(t.cols)
        elif scope == "wrt2":
            size = len(t.rows)
        else:
            raise ValueError(f"unknown scope {scope!r}")
        for r in t.rows:
            for c in t.cols:
                out[(r, c)] = size
    return out


def _check_tiling(tiles: list[Tile], m: ValueMatrix) -> None:
    total = sum(t.size for t in tiles)
    if total != m.size:
        raise MatrixError("tiles do not cover the matrix")


# -- PAR operations ---------------------------------------------------------


def worst_case_par(tiles: list[Tile], m: ValueMatrix, scope: str) -> Fraction:
    """max over cells of the ideal-to-induced region-size ratio."""
    if scope == "subjective":
        return max(worst_case_par(tiles, m, "wrt1"), worst_case_par(tiles, m, "wrt2"))
    _check_tiling(tiles, m)
    ideal = _ideal_sizes_by_cell(m, scope)
    denom = _tile_sizes_by_cell(tiles, scope)
    return max(Fraction(ideal(cell), denom[cell]) for cell in m.cells())


def avg_par(
    tiles: list[Tile], m: ValueMatrix, scope: str, dist: Distribution
) -> Fraction:
    """Expectation under dist of the region-size ratio, cell by cell."""
    if scope == "subjective":
        return max(
            avg_par(tiles, m, "wrt1", dist), avg_par(tiles, m, "wrt2", dist)
        )
    _check_tiling(tiles, m)
    ideal = _ideal_sizes_by_cell(m, scope)
    denom = _tile_sizes_by_cell(tiles, scope)
    if dist.kind == "uniform":
        # group cells sharing the same (ideal, induced) size pair
        pairs = Counter((ideal(cell), denom[cell]) for cell in m.cells())
        total = sum(
            (count * Fraction(ri, rp) for (ri, rp), count in pairs.items()),
            Fraction(0),
        )
        return total / m.size
    return sum(
        (dist.weight(cell) * Fraction(ideal(cell), denom[cell])
         for cell in dist.support()),
        Fraction(0),
    )


def avg_par_uniform(tiles: list[Tile], m: ValueMatrix, scope: str) -> Fraction:
    """Uniform-distribution shortcut: the per-cell expectation collapses
    to a plain sum of ideal-region sizes over induced rectangles."""
    if scope == "subjective":
        return max(avg_par_uniform(tiles, m, "wrt1"), avg_par_uniform(tiles, m, "wrt2"))
    _check_tiling(tiles, m)
    ideal = _ideal_sizes_by_cell(m, scope)
    total = 0
    for t in tiles:
        if scope == "objective":
            total += ideal((next(iter(t.rows)), next(iter(t.cols))))
        elif scope == "wrt1":
            c0 = next(iter(t.cols))
            total += sum(ideal((r, c0)) for r in t.rows)
        else:
            r0 = next(iter(t.rows))
            total += sum(ideal((r0, c)) for c in t.cols)
    return Fraction(total, m.size)


def subjective_ratio(
    tiles: list[Tile], m: ValueMatrix, dist: Distribution
) -> Fraction:
    """max-over-players subjective PAR divided by min-over-players."""
    p1 = avg_par(tiles, m, "wrt1", dist)
    p2 = avg_par(tiles, m, "wrt2", dist)
    return max(p1, p2) / min(p1, p2)


# -- generalized g-PARs ------------------------------------------------------


def hamming_distance(x: Cell, y: Cell) -> int:
    return ((x[0] ^ y[0]).bit_count() + (x[1] ^ y[1]).bit_count())


class GVariant(Enum):
    CARDINALITY = "cardinality"
    PROBABILITY_MASS = "probability_mass"
    ADDITIVE_DISTANCE = "additive_distance"
    MAX_DISTANCE = "max_distance"
    PLAUSIBLE_DENIABILITY = "plausible_deniability"
    RELATIVE_SIZE = "relative_size"


@dataclass(frozen=True)
class GFunction:
    """A region measure g(R, x) replacing plain cardinality in the PAR."""

    variant: GVariant
    distance: Callable[[Cell, Cell], object] = hamming_distance
    threshold: Fraction = Fraction(1, 2)  # plausible_deniability only
    # defaults to 1 + player 1's input value, which keeps the measure
    # positive at x = 0
    size_measure: Callable[[Cell], object] = lambda cell: 1 + cell[0]

    def value(self, region: frozenset[Cell], x: Cell, dist: Distribution) -> Fraction:
        v = self._raw(region, x, dist)
        if v <= 0:
            raise GValueError(
                f"g({self.variant.value}) is {v} on a region containing {x}"
            )
        return Fraction(v)

    def _raw(self, region: frozenset[Cell], x: Cell, dist: Distribution):
        if self.variant is GVariant.CARDINALITY:
            return len(region)
        if self.variant is GVariant.PROBABILITY_MASS:
            return dist.mass(region)
        if self.variant is GVariant.ADDITIVE_DISTANCE:
            return 1 + sum(self.distance(x, y) for y in region if y != x)
        if self.variant is GVariant.MAX_DISTANCE:
            others = [self.distance(y, x) for y in region if y != x]
            return 1 + (max(others) if others else 0)
        if self.variant is GVariant.PLAUSIBLE_DENIABILITY:
            region_mass = dist.mass(region)
            if region_mass == 0:
                raise GValueError("plausible deniability on a zero-mass region")
            best = None
            for d0 in sorted({self.distance(y, x) for y in region}):
                far = dist.mass({y for y in region if self.distance(y, x) >= d0})
                if far / region_mass >= self.threshold:
                    best = d0
            if best is None:
                raise GValueError("no distance meets the plausibility threshold")
            return 1 + best
        if self.variant is GVariant.RELATIVE_SIZE:
            diam = max(
                (self.distance(y, z) for y in region for z in region),
                default=0,
            )
            size = self.size_measure(x)
            if size == 0:
                raise GValueError("|x| = 0 under relative_size")
            return Fraction(diam) / Fraction(size)
        raise ValueError(f"unknown g variant {self.variant!r}")


def _ideal_regions_by_cell(m: ValueMatrix, scope: str) -> dict[Cell, frozenset[Cell]]:
    groups: dict[object, set[Cell]] = {}
    for r in range(m.n_rows):
        for c in range(m.n_cols):
            label = m.label(r, c)
            if scope == "objective":
                key = label
            elif scope == "wrt1":
                key = (r, label)
            else:
                key = (c, label)
            groups.setdefault(key, set()).add((r, c))
    out: dict[Cell, frozenset[Cell]] = {}
    for cells in groups.values():
        frozen = frozenset(cells)
        for cell in frozen:
            out[cell] = frozen
    return out


def _tile_regions_by_cell(tiles: list[Tile], scope: str) -> dict[Cell, frozenset[Cell]]:
    out: dict[Cell, frozenset[Cell]] = {}
    for t in tiles:
        if scope == "objective":
            cells = frozenset((r, c) for r in t.rows for c in t.cols)
            for cell in cells:
                out[cell] = cells
        elif scope == "wrt1":
            for r in t.rows:
                cells = frozenset((r, c) for c in t.cols)
                for cell in cells:
                    out[cell] = cells
        else:
            for c in t.cols:
                cells = frozenset((r, c) for r in t.rows)
                for cell in cells:
                    out[cell] = cells
    return out


def g_par(
    tiles: list[Tile],
    m: ValueMatrix,
    scope: str,
    dist: Distribution,
    g: GFunction,
    mode: str = "average",
) -> Fraction:
    """Worst-case or average-case PAR with region size replaced by g."""
    if mode not in ("worst", "average"):
        raise ValueError(f"unknown mode {mode!r}")
    if scope == "subjective":
        return max(
            g_par(tiles, m, "wrt1", dist, g, mode),
            g_par(tiles, m, "wrt2", dist, g, mode),
        )
    _check_tiling(tiles, m)
    ideal = _ideal_regions_by_cell(m, scope)
    induced = _tile_regions_by_cell(tiles, scope)

    def ratio(cell: Cell) -> Fraction:
        return g.value(ideal[cell], cell, dist) / g.value(induced[cell], cell, dist)

    if mode == "worst":
        return max(ratio(cell) for cell in m.cells())
    return sum(
        (dist.weight(cell) * ratio(cell) for cell in dist.support()), Fraction(0)
    )


# -- optimal-protocol search -------------------------------------------------


def optimal_avg_objective_par(m: ValueMatrix) -> Fraction:
    """Exact minimum, over all protocol-inducible monochromatic tilings,
    of the uniform average-case objective PAR.

    Memoized recursion over live blocks: a monochromatic block costs the
    size of its ideal region; otherwise the cost is the cheapest row or
    column bipartition.  Cost is additive over tiles, so the split order
    cannot change the minimum.
    """
    if m.n_rows > (1 << OPTIMAL_DP_BITS_CAP) or m.n_cols > (1 << OPTIMAL_DP_BITS_CAP):
        raise CapExceededError(
            f"optimal-tiling search is capped at 2^{OPTIMAL_DP_BITS_CAP} inputs"
        )
    sizes = ideal_region_sizes(m)

    def bipartitions(items: tuple[int, ...]):
        rest = items[1:]
        for mask in range(1, 1 << len(rest)):
            part = tuple(x for i, x in enumerate(rest) if mask >> i & 1)
            yield part

    @lru_cache(maxsize=None)
    def cost(rows: tuple[int, ...], cols: tuple[int, ...]) -> int:
        label = m.label(rows[0], cols[0])
        if all(m.label(r, c) == label for r in rows for c in cols):
            return sizes[label]
        best = None
        for part in bipartitions(rows):
            other = tuple(r for r in rows if r not in part)
            value = cost(part, cols) + cost(other, cols)
            if best is None or value < best:
                best = value
        for part in bipartitions(cols):
            other = tuple(c for c in cols if c not in part)
            value = cost(rows, part) + cost(rows, other)
            if best is None or value < best:
                best = value
        return best

    total = cost(tuple(range(m.n_rows)), tuple(range(m.n_cols)))
    return Fraction(total, m.size)


# -- probability-mass counterexample ----------------------------------------


@dataclass(frozen=True)
class MassCounterexample:
    """The instance showing that a mass-based average PAR cannot tell a
    privacy-revealing distribution from a privacy-friendly one."""

    matrix: ValueMatrix
    tiles: list[Tile]
    d_low: Distribution  # row 0 carries total mass epsilon
    d_high: Distribution  # row 0 carries total mass 1 - epsilon


def prob_mass_counterexample(n: int, epsilon: Fraction) -> MassCounterexample:
    """Columns are maximal regions over rows {0..n}; the protocol reveals
    only whether player 1's value is 0."""
    if n < 2 or not 0 < epsilon < 1:
        raise ValueError("need n >= 2 and 0 < epsilon < 1")
    m = ValueMatrix.from_function(n + 1, n, lambda r, c: c)
    tiles = []
    others = frozenset(range(1, n + 1))
    for c in range(n):
        col = frozenset({c})
        tiles.append(Tile(frozenset({0}), col, c, "0" + format(c, "b")))
        tiles.append(Tile(others, col, c, "1" + format(c, "b")))
    low: dict[Cell, Fraction] = {}
    high: dict[Cell, Fraction] = {}
    for c in range(n):
        low[(0, c)] = epsilon / n
        high[(0, c)] = (1 - epsilon) / n
        for r in range(1, n + 1):
            low[(r, c)] = (1 - epsilon) / n ** 2
            high[(r, c)] = epsilon / n ** 2
    return MassCounterexample(
        m,
        tiles,
        Distribution.explicit(n + 1, n, low),
        Distribution.explicit(n + 1, n, high),
    )


# -- reports -----------------------------------------------------------------


def decimal_str(x: Fraction, digits: int = 15) -> str:
    """Render an exact rational with the given number of significant
    digits, without going through binary floating point."""
    from decimal import Decimal, localcontext

    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return str(d)


@dataclass(frozen=True)
class ParReport:
    problem: str
    protocol: str
    k: int
    scope: str
    mode: str
    distribution: str
    value: Fraction
    g: str = "cardinality"

    def to_obj(self) -> dict:
        return {
            "problem": self.problem,
            "protocol": self.protocol,
            "k": self.k,
            "scope": self.scope,
            "mode": self.mode,
            "distribution": self.distribution,
            "g": self.g,
            "value": {
                "num": str(self.value.numerator),
                "den": str(self.value.denominator),
            },
            "value_decimal": decimal_str(self.value),
        }
