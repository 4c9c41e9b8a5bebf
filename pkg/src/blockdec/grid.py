"""Persistence modules on a finite 3-D cell grid.

A module assigns a GF(p) vector space dimension to every grid point
(points are 1-based triples, one index per cell) and a step matrix to every
axis-adjacent pair of points.  The module represents a functor on R^3 that
is constant on the open cells of a breakpoint grid: cell 1 of an axis is
the ray down to -infinity and the last cell the ray up to +infinity.

Transitions between comparable points are composites of step maps; path
independence is equivalent to every adjacent square commuting, which
``validate`` checks exhaustively.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dataclass_field
from typing import Iterator, Mapping

from .field import PrimeField
from .linalg import Matrix, block_diag

GridPoint = tuple[int, int, int]

AXES = (1, 2, 3)

__all__ = [
    "Grid",
    "GridPoint",
    "GridModule",
    "SliceModule",
    "ValidationIssue",
    "ValidationReport",
    "zero_module",
    "direct_sum",
    "AXES",
]


@dataclass(frozen=True)
class Grid:
    """Cell counts per axis; every axis has at least one cell."""

    cells: tuple[int, int, int]

    def __post_init__(self) -> None:
        if len(self.cells) != 3 or any(not isinstance(m, int) or m < 1 for m in self.cells):
            raise ValueError(f"grid needs three cell counts >= 1, got {self.cells!r}")
        object.__setattr__(self, "cells", tuple(self.cells))

    def contains(self, t: GridPoint) -> bool:
        return all(1 <= ti <= mi for ti, mi in zip(t, self.cells))

    def points(self) -> Iterator[GridPoint]:
        return itertools.product(*(range(1, m + 1) for m in self.cells))

    def pairs(self, strict_axes: int = 0) -> Iterator[tuple[GridPoint, GridPoint]]:
        """All pairs s <= t, strictly increasing on at least ``strict_axes`` axes."""
        for s in self.points():
            ranges = [range(si, m + 1) for si, m in zip(s, self.cells)]
            for t in itertools.product(*ranges):
                if sum(ti > si for si, ti in zip(s, t)) >= strict_axes:
                    yield s, t

    def reverse(self, t: GridPoint) -> GridPoint:
        return tuple(m + 1 - ti for ti, m in zip(t, self.cells))


def _step(t: GridPoint, axis: int, delta: int = 1) -> GridPoint:
    out = list(t)
    out[axis - 1] += delta
    return tuple(out)


def _with_coord(t: GridPoint, axis: int, value: int) -> GridPoint:
    out = list(t)
    out[axis - 1] = value
    return tuple(out)


@dataclass(frozen=True)
class ValidationIssue:
    kind: str  # "dims" | "shape" | "square"
    at: tuple
    detail: str


@dataclass
class ValidationReport:
    issues: list[ValidationIssue] = dataclass_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(f"{i.kind} at {i.at}: {i.detail}" for i in self.issues)


class GridModule:
    """A pointwise finite-dimensional module on a finite grid.

    ``dims`` maps every grid point to a dimension; ``steps`` maps
    (axis, point) to the step matrix from the point to its axis-successor,
    for every point that has one.  The structural key set is enforced at
    construction; value-level problems (shape mismatches, non-commuting
    squares) are collected by ``validate``.

    Instances are immutable after construction.  The transition memo is the
    only mutable state; lookups are idempotent so concurrent use is safe.
    """

    def __init__(
        self,
        field: PrimeField,
        grid: Grid,
        dims: Mapping[GridPoint, int],
        steps: Mapping[tuple[int, GridPoint], Matrix],
    ):
        self.field = field
        self.grid = grid
        self._dims = {t: int(dims.get(t, 0)) for t in grid.points()}
        expected = {
            (axis, t)
            for t in grid.points()
            for axis in AXES
            if t[axis - 1] < grid.cells[axis - 1]
        }
        given = set(steps.keys())
        if given != expected:
            missing = sorted(expected - given)
            extra = sorted(given - expected)
            raise ValueError(f"step map keys wrong: missing {missing}, extra {extra}")
        self._steps = dict(steps)
        self._transitions: dict[tuple[GridPoint, GridPoint], Matrix] = {}

    def dim(self, t: GridPoint) -> int:
        return self._dims[t]

    @property
    def dims(self) -> dict[GridPoint, int]:
        return dict(self._dims)

    def total_dim(self) -> int:
        return sum(self._dims.values())

    def step(self, axis: int, t: GridPoint) -> Matrix:
        return self._steps[(axis, t)]

    def step_keys(self) -> list[tuple[int, GridPoint]]:
        return sorted(self._steps.keys())

    def transition(self, s: GridPoint, t: GridPoint) -> Matrix:
        """The composite map from s to t along axis 1, then 2, then 3 (memoized)."""
        if not (self.grid.contains(s) and self.grid.contains(t)):
            raise ValueError(f"points {s}, {t} outside grid {self.grid.cells}")
        if any(si > ti for si, ti in zip(s, t)):
            raise ValueError(f"transition requires s <= t, got {s} and {t}")
        if s == t:
            return Matrix.identity(self.field, self.dim(s))
        cached = self._transitions.get((s, t))
        if cached is not None:
            return cached
        # peel the last step off the fixed axis-1-then-2-then-3 path
        for axis in (3, 2, 1):
            if t[axis - 1] > s[axis - 1]:
                prev = _step(t, axis, -1)
                out = self.step(axis, prev) @ self.transition(s, prev)
                break
        self._transitions[(s, t)] = out
        return out

    def validate(self) -> ValidationReport:
        """Report every dimension/shape mismatch and non-commuting adjacent square."""
        report = ValidationReport()
        for t in self.grid.points():
            if self._dims[t] < 0:
                report.issues.append(ValidationIssue("dims", t, "negative dimension"))
        for (axis, t), m in sorted(self._steps.items()):
            u = _step(t, axis)
            want = (self._dims[u], self._dims[t])
            if m.shape != want:
                report.issues.append(
                    ValidationIssue(
                        "shape",
                        (axis, t),
                        f"step has shape {m.shape}, expected {want}",
                    )
                )
            if m.field != self.field:
                report.issues.append(
                    ValidationIssue("shape", (axis, t), "step over a different field")
                )
        if not report.ok:
            return report
        for t in self.grid.points():
            for i, j in ((1, 2), (1, 3), (2, 3)):
                if t[i - 1] >= self.grid.cells[i - 1] or t[j - 1] >= self.grid.cells[j - 1]:
                    continue
                via_i = self.step(j, _step(t, i)) @ self.step(i, t)
                via_j = self.step(i, _step(t, j)) @ self.step(j, t)
                if via_i != via_j:
                    report.issues.append(
                        ValidationIssue(
                            "square",
                            t,
                            f"axes ({i},{j}) square at {t} does not commute",
                        )
                    )
        return report

    def restrict_slice(self, axis: int, index: int) -> "SliceModule":
        """The 2-parameter module obtained by pinning one axis to one cell."""
        if axis not in AXES:
            raise ValueError(f"axis must be 1, 2 or 3, got {axis}")
        if not (1 <= index <= self.grid.cells[axis - 1]):
            raise ValueError(f"cell {index} out of range on axis {axis}")
        kept = tuple(a for a in AXES if a != axis)

        def unslice(q: tuple[int, int]) -> GridPoint:
            t = [index, index, index]
            t[kept[0] - 1] = q[0]
            t[kept[1] - 1] = q[1]
            return tuple(t)

        cells = (self.grid.cells[kept[0] - 1], self.grid.cells[kept[1] - 1])
        dims = {}
        steps = {}
        for q1 in range(1, cells[0] + 1):
            for q2 in range(1, cells[1] + 1):
                q = (q1, q2)
                t = unslice(q)
                dims[q] = self._dims[t]
                if q1 < cells[0]:
                    steps[(1, q)] = self.step(kept[0], t)
                if q2 < cells[1]:
                    steps[(2, q)] = self.step(kept[1], t)
        return SliceModule(self.field, cells, dims, steps, parent_axis=axis, parent_index=index)

    def dualize(self) -> "GridModule":
        """Pointwise dual: axes reversed, step maps transposed."""
        rev = self.grid.reverse
        dims = {t: self._dims[rev(t)] for t in self.grid.points()}
        steps = {}
        for t in self.grid.points():
            for axis in AXES:
                if t[axis - 1] < self.grid.cells[axis - 1]:
                    src = rev(_step(t, axis))
                    steps[(axis, t)] = self.step(axis, src).transpose()
        return GridModule(self.field, self.grid, dims, steps)

    def basis_twist(self, seed: int) -> "GridModule":
        """Conjugate by a random invertible change of basis at every point.

        The result is isomorphic to the input; with a fixed seed the twist is
        reproducible.
        """
        rng = random.Random(seed)
        p = self.field.p
        change: dict[GridPoint, Matrix] = {}
        for t in sorted(self.grid.points()):
            d = self._dims[t]
            while True:
                cand = Matrix(
                    self.field,
                    [[rng.randrange(p) for _ in range(d)] for _ in range(d)],
                    rows=d,
                    cols=d,
                )
                if cand.is_invertible():
                    change[t] = cand
                    break
        steps = {}
        for (axis, t), m in self._steps.items():
            u = _step(t, axis)
            steps[(axis, t)] = change[u] @ m @ change[t].inverse()
        return GridModule(self.field, self.grid, dict(self._dims), steps)


class SliceModule:
    """A 2-parameter module on a finite 2-D grid, as cut out of a 3-D module."""

    def __init__(
        self,
        field: PrimeField,
        cells: tuple[int, int],
        dims: Mapping[tuple[int, int], int],
        steps: Mapping[tuple[int, tuple[int, int]], Matrix],
        parent_axis: int | None = None,
        parent_index: int | None = None,
    ):
        self.field = field
        self.cells = cells
        self._dims = dict(dims)
        self._steps = dict(steps)
        self.parent_axis = parent_axis
        self.parent_index = parent_index
        self._transitions: dict[tuple[tuple[int, int], tuple[int, int]], Matrix] = {}

    def dim(self, q: tuple[int, int]) -> int:
        return self._dims[q]

    def step(self, axis: int, q: tuple[int, int]) -> Matrix:
        return self._steps[(axis, q)]

    def points(self) -> Iterator[tuple[int, int]]:
        return itertools.product(range(1, self.cells[0] + 1), range(1, self.cells[1] + 1))

    def transition(self, s: tuple[int, int], t: tuple[int, int]) -> Matrix:
        if any(si > ti for si, ti in zip(s, t)):
            raise ValueError(f"transition requires s <= t, got {s} and {t}")
        if s == t:
            return Matrix.identity(self.field, self.dim(s))
        cached = self._transitions.get((s, t))
        if cached is not None:
            return cached
        if t[1] > s[1]:
            prev = (t[0], t[1] - 1)
            out = self.step(2, prev) @ self.transition(s, prev)
        else:
            prev = (t[0] - 1, t[1])
            out = self.step(1, prev) @ self.transition(s, prev)
        self._transitions[(s, t)] = out
        return out


def zero_module(field: PrimeField, grid: Grid) -> GridModule:
    dims = {t: 0 for t in grid.points()}
    steps = {}
    for t in grid.points():
        for axis in AXES:
            if t[axis - 1] < grid.cells[axis - 1]:
                steps[(axis, t)] = Matrix.zeros(field, 0, 0)
    return GridModule(field, grid, dims, steps)


def direct_sum(a: GridModule, b: GridModule) -> GridModule:
    """Pointwise direct sum; dimensions add, step maps become block diagonal."""
    if a.grid != b.grid:
        raise ValueError(f"grid mismatch: {a.grid.cells} vs {b.grid.cells}")
    if a.field != b.field:
        raise ValueError("field mismatch in direct sum")
    dims = {t: a.dim(t) + b.dim(t) for t in a.grid.points()}
    steps = {key: block_diag(a.step(*key), b.step(*key)) for key in a.step_keys()}
    return GridModule(a.field, a.grid, dims, steps)
