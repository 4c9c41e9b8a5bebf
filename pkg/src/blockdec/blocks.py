"""Cut and block combinatorics on a finite 3-D cell grid.

An axis of the grid has cells 1..m; cell 1 extends down to -infinity and
cell m up to +infinity.  A cut on the axis is a breakpoint position in
[0, m]: position 0 leaves nothing below, position m nothing above.  An
interval (a, b) with a < b denotes cells a+1..b, i.e. the part of the axis
between a lower cut at a and an upper cut at b.

Blocks are the special products of intervals:

  * birth: unbounded above on every axis (b_i = m_i for all i);
  * death: unbounded below on every axis (a_i = 0 for all i), full grid
    excluded;
  * strict layer on axis i: bounded on axis i on both sides, full on the
    other two axes.

Half-space shapes satisfy more than one description; they are stored once
with precedence birth > death > layer, which keeps multiplicities from
being double counted.  In particular the full grid is classified birth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .grid import Grid, GridPoint

BIRTH = "birth"
DEATH = "death"
LAYER = ("layer1", "layer2", "layer3")

__all__ = [
    "AxisInterval",
    "Block",
    "enumerate_blocks",
    "BIRTH",
    "DEATH",
    "LAYER",
]


@dataclass(frozen=True, order=True)
class AxisInterval:
    """Cells a+1..b of one axis, i.e. the slab between cuts at a and b."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if not (0 <= self.a < self.b):
            raise ValueError(f"interval ({self.a}, {self.b}) must satisfy 0 <= a < b")

    def contains_cell(self, t: int) -> bool:
        return self.a < t <= self.b


Cuboid = tuple[AxisInterval, AxisInterval, AxisInterval]


def _classify(grid: Grid, intervals: Cuboid) -> str | None:
    m = grid.cells
    for iv, mi in zip(intervals, m):
        if iv.b > mi:
            raise ValueError(f"interval {iv} exceeds axis size {mi}")
    if all(iv.b == mi for iv, mi in zip(intervals, m)):
        return BIRTH
    if all(iv.a == 0 for iv in intervals):
        return DEATH
    for i in range(3):
        others_full = all(
            intervals[j].a == 0 and intervals[j].b == m[j] for j in range(3) if j != i
        )
        if others_full and 1 <= intervals[i].a and intervals[i].b <= m[i] - 1:
            return LAYER[i]
    return None


@dataclass(frozen=True)
class Block:
    """A product of three axis intervals that is a birth, death or layer block."""

    grid: Grid
    intervals: Cuboid
    kind: str

    @classmethod
    def of(cls, grid: Grid, intervals) -> "Block":
        ivs = tuple(
            iv if isinstance(iv, AxisInterval) else AxisInterval(*iv) for iv in intervals
        )
        kind = _classify(grid, ivs)
        if kind is None:
            raise ValueError(f"{ivs} is not a block shape on grid {grid.cells}")
        return cls(grid, ivs, kind)

    def sort_key(self):
        return tuple(iv.a for iv in self.intervals) + tuple(iv.b for iv in self.intervals)

    def contains(self, t: GridPoint) -> bool:
        return all(iv.contains_cell(ti) for iv, ti in zip(self.intervals, t))

    def min_corner(self) -> GridPoint:
        """The componentwise-least grid point of the block."""
        return tuple(iv.a + 1 for iv in self.intervals)

    def points(self) -> Iterator[GridPoint]:
        for t in self.grid.points():
            if self.contains(t):
                yield t

    def partition_group(self) -> str:
        """Grouping used by the residual-split argument.

        Layers keep their axis tag, birth blocks (including the full grid)
        form one group, and proper death blocks another; this coincides with
        the stored kind because of the birth > death > layer precedence.
        """
        return self.kind

    def reversed(self) -> "Block":
        """The block seen through order reversal of every axis."""
        ivs = tuple(
            AxisInterval(m - iv.b, m - iv.a) for iv, m in zip(self.intervals, self.grid.cells)
        )
        return Block.of(self.grid, ivs)

    def to_doc(self) -> dict:
        return {
            "a": [iv.a for iv in self.intervals],
            "b": [iv.b for iv in self.intervals],
            "class": self.kind,
        }

    @classmethod
    def from_doc(cls, grid: Grid, doc: dict) -> "Block":
        block = cls.of(grid, tuple(zip(doc["a"], doc["b"])))
        if "class" in doc and doc["class"] != block.kind:
            raise ValueError(
                f"block {doc['a']}..{doc['b']} has class {block.kind}, not {doc['class']}"
            )
        return block


def enumerate_blocks(grid: Grid) -> list[Block]:
    """All blocks of the grid, deduplicated as cell sets and sorted.

    Counts: prod(m_i) birth blocks, prod(m_i) - 1 proper death blocks and
    C(m_i - 1, 2) strict layers per axis.
    """
    m = grid.cells
    seen: set[Cuboid] = set()
    out: list[Block] = []

    def add(ivs: Cuboid) -> None:
        if ivs not in seen:
            seen.add(ivs)
            out.append(Block.of(grid, ivs))

    for a1 in range(m[0]):
        for a2 in range(m[1]):
            for a3 in range(m[2]):
                add(
                    (
                        AxisInterval(a1, m[0]),
                        AxisInterval(a2, m[1]),
                        AxisInterval(a3, m[2]),
                    )
                )
    for b1 in range(1, m[0] + 1):
        for b2 in range(1, m[1] + 1):
            for b3 in range(1, m[2] + 1):
                if (b1, b2, b3) == m:
                    continue  # full grid already listed as birth
                add((AxisInterval(0, b1), AxisInterval(0, b2), AxisInterval(0, b3)))
    for i in range(3):
        full = [AxisInterval(0, m[j]) for j in range(3)]
        for a in range(1, m[i]):
            for b in range(a + 1, m[i]):
                ivs = list(full)
                ivs[i] = AxisInterval(a, b)
                add(tuple(ivs))

    out.sort(key=Block.sort_key)
    return out
