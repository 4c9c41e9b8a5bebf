"""Shared construction and law-checking helpers for the test suite."""

from __future__ import annotations

import itertools
import random

from blockdec import (
    Grid,
    GridModule,
    LimitCache,
    Matrix,
    PrimeField,
    SquareDiagram,
    Subspace,
    random_block_sum,
)
from blockdec.blocks import AxisInterval
from blockdec.linalg import hstack

FIELD = PrimeField()


def random_grid(rng: random.Random, max_cells: int = 4, max_points: int | None = None) -> Grid:
    while True:
        cells = tuple(rng.randint(1, max_cells) for _ in range(3))
        if max_points is None or cells[0] * cells[1] * cells[2] <= max_points:
            return Grid(cells)


def twisted_ground_truth(field, grid, seed, max_blocks=3, max_mult=2):
    truth = random_block_sum(field, grid, seed, max_blocks=max_blocks, max_mult=max_mult)
    return truth, truth.module.basis_twist(seed + 10_000)


def random_matrix(field, rng, rows, cols) -> Matrix:
    return Matrix(
        field,
        [[rng.randrange(field.p) for _ in range(cols)] for _ in range(rows)],
        rows=rows,
        cols=cols,
    )


def random_subspace(field, rng, ambient, max_gens=None) -> Subspace:
    gens = rng.randint(0, max_gens if max_gens is not None else ambient)
    return Subspace.spanned_by(
        field, ambient, [[rng.randrange(field.p) for _ in range(ambient)] for _ in range(gens)]
    )


def random_commuting_square(field, rng, max_dim: int = 4) -> SquareDiagram:
    """A commuting square with freely chosen g maps and f maps sampled from
    the pullback, so exactness holds for some samples and fails for others."""
    b = rng.randint(0, max_dim)
    c = rng.randint(0, max_dim)
    d = rng.randint(0, max_dim)
    a = rng.randint(0, max_dim)
    g1 = random_matrix(field, rng, d, b)
    g2 = random_matrix(field, rng, d, c)
    pullback = hstack([g1, -g2]).kernel()
    combo = random_matrix(field, rng, a, pullback.dim)
    f_stacked = (combo @ Matrix(field, pullback.basis, rows=pullback.dim, cols=b + c)).transpose()
    f1 = Matrix(field, f_stacked.data[:b], rows=b, cols=a)
    f2 = Matrix(field, f_stacked.data[b:], rows=c, cols=a)
    return SquareDiagram(f1, f2, g1, g2)


def all_intervals(m: int) -> list[AxisInterval]:
    return [AxisInterval(a, b) for a in range(m + 1) for b in range(a + 1, m + 1)]


def all_cuboids(grid: Grid):
    per_axis = [all_intervals(m) for m in grid.cells]
    return [tuple(ivs) for ivs in itertools.product(*per_axis)]


def cuboid_points(grid: Grid, cuboid):
    for t in grid.points():
        if all(iv.contains_cell(ti) for iv, ti in zip(cuboid, t)):
            yield t


def _pick(limits_by_axis, signs, which):
    if which == "im":
        return [
            (ax.im_plus if sign == "+" else ax.im_minus)
            for ax, sign in zip(limits_by_axis, signs)
        ]
    return [
        (ax.ker_plus if sign == "+" else ax.ker_minus)
        for ax, sign in zip(limits_by_axis, signs)
    ]


def check_single_axis_laws(module: GridModule, s, t) -> None:
    """Image of a transition is the meet of the three single-axis relaxations;
    its kernel is the join of the three single-axis kernels."""
    trans = module.transition(s, t)
    image = trans.image()
    meet = None
    for axis in (1, 2, 3):
        src = tuple(si if a == axis else ti for a, (si, ti) in zip((1, 2, 3), zip(s, t)))
        part = module.transition(src, t).image()
        meet = part if meet is None else meet & part
    assert image == meet, f"image law fails for {s} -> {t}"
    kernel = trans.kernel()
    join = Subspace.zero(module.field, module.dim(s))
    for axis in (1, 2, 3):
        dst = tuple(ti if a == axis else si for a, (si, ti) in zip((1, 2, 3), zip(s, t)))
        join = join + module.transition(s, dst).kernel()
    assert kernel == join, f"kernel law fails for {s} -> {t}"


def check_transport_all_signs(module: GridModule, cache: LimitCache, cuboid, s, t) -> None:
    """Transport of mixed-sign image meets and kernel joins between two points."""
    ax_s = [cache.axis_limits(i + 1, cuboid[i], s) for i in range(3)]
    ax_t = [cache.axis_limits(i + 1, cuboid[i], t) for i in range(3)]
    trans = module.transition(s, t)
    for signs in itertools.product("+-", repeat=3):
        im_s = _pick(ax_s, signs, "im")
        im_t = _pick(ax_t, signs, "im")
        meet_s = im_s[0] & im_s[1] & im_s[2]
        meet_t = im_t[0] & im_t[1] & im_t[2]
        assert trans.image_of(meet_s) == meet_t, f"image transport {signs} fails {s}->{t}"
        ker_s = _pick(ax_s, signs, "ker")
        ker_t = _pick(ax_t, signs, "ker")
        join_s = ker_s[0] + ker_s[1] + ker_s[2]
        join_t = ker_t[0] + ker_t[1] + ker_t[2]
        assert trans.preimage_of(join_t) == join_s, f"kernel transport {signs} fails {s}->{t}"


def check_section_transport(module: GridModule, cache: LimitCache, cuboid, s, t) -> None:
    """The combined cuboid images push forward and kernels pull back exactly."""
    secs_s = cache.sections(cuboid, s)
    secs_t = cache.sections(cuboid, t)
    trans = module.transition(s, t)
    assert trans.image_of(secs_s.im_plus) == secs_t.im_plus
    assert trans.image_of(secs_s.im_minus) == secs_t.im_minus
    assert trans.preimage_of(secs_t.ker_plus) == secs_s.ker_plus
    assert trans.preimage_of(secs_t.ker_minus) == secs_s.ker_minus


def check_kernel_image_inclusions(module: GridModule, cache: LimitCache, cuboid, t) -> None:
    """Kernels along one axis land inside the images along the other two,
    with signs dictated by which cuts are trivial."""
    m = module.grid.cells
    ax = [cache.axis_limits(i + 1, cuboid[i], t) for i in range(3)]
    for i in range(3):
        j, k = [x for x in range(3) if x != i]
        ker = ax[i].ker_plus if cuboid[i].b < m[i] else ax[i].ker_minus
        im_j = ax[j].im_minus if cuboid[j].a >= 1 else ax[j].im_plus
        im_k = ax[k].im_minus if cuboid[k].a >= 1 else ax[k].im_plus
        assert (im_j & im_k).contains_subspace(ker), (
            f"kernel/image inclusion fails at {t}, axis role {i + 1}, cuboid {cuboid}"
        )


def nonexact_commuting_module(field=FIELD) -> GridModule:
    """Valid functor whose axis-3 slices fail square exactness.

    One-dimensional everywhere on a 2x2x2 grid; in each axis-3 layer the two
    maps out of the bottom corner are identities while the two maps into the
    top corner are zero, so both composites vanish (the squares commute) but
    the middle of the sequence is strictly larger than the image.
    """
    grid = Grid((2, 2, 2))
    dims = {t: 1 for t in grid.points()}
    one = Matrix(field, [[1]])
    zero = Matrix(field, [[0]])
    steps = {}
    for t in grid.points():
        for axis in (1, 2, 3):
            if t[axis - 1] >= grid.cells[axis - 1]:
                continue
            if axis == 3:
                steps[(axis, t)] = one
            elif t[0] == 1 and t[1] == 1:
                steps[(axis, t)] = one
            else:
                steps[(axis, t)] = zero
    module = GridModule(field, grid, dims, steps)
    assert module.validate().ok
    return module


def stacked_residual_split_ok(decomposer, report) -> bool:
    """Residual submodule plus all non-death extractions fill the module."""
    module = decomposer.module
    residual = decomposer.death_residual()
    parts = [residual.spaces]
    for blk, _mult in report.entries:
        if blk.partition_group() != "death":
            parts.append(decomposer.extract(blk).spaces)
    for t in module.grid.points():
        total = Subspace.zero(module.field, module.dim(t))
        count = 0
        for spaces in parts:
            total = total + spaces[t]
            count += spaces[t].dim
        if total.dim != module.dim(t) or count != module.dim(t):
            return False
    return True
