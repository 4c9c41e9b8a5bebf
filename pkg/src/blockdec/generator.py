"""Construction of test modules: block modules, seeded random sums, the
canonical non-decomposable counterexample, and commutativity-preserving
perturbations for fuzzing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .blocks import Block, enumerate_blocks
from .field import PrimeField
from .grid import AXES, Grid, GridModule, GridPoint, _step, direct_sum, zero_module
from .linalg import Matrix, solve_right

__all__ = [
    "GroundTruth",
    "PerturbBudgetError",
    "block_module",
    "random_block_sum",
    "counterexample",
    "perturb",
]


class PerturbBudgetError(RuntimeError):
    """No repairable mutation was found within the resampling budget."""


@dataclass(frozen=True)
class GroundTruth:
    """A module built as an explicit direct sum, with its block multiset."""

    module: GridModule
    multiset: tuple[tuple[Block, int], ...]


def block_module(field: PrimeField, grid: Grid, blk: Block) -> GridModule:
    """One-dimensional on the block, zero elsewhere; identity steps inside."""
    if blk.grid != grid:
        raise ValueError("block belongs to a different grid")
    dims = {t: (1 if blk.contains(t) else 0) for t in grid.points()}
    steps = {}
    for t in grid.points():
        for axis in AXES:
            if t[axis - 1] >= grid.cells[axis - 1]:
                continue
            u = _step(t, axis)
            if blk.contains(t) and blk.contains(u):
                steps[(axis, t)] = Matrix.identity(field, 1)
            else:
                steps[(axis, t)] = Matrix.zeros(field, dims[u], dims[t])
    return GridModule(field, grid, dims, steps)


def random_block_sum(
    field: PrimeField,
    grid: Grid,
    seed: int,
    max_blocks: int = 3,
    max_mult: int = 2,
) -> GroundTruth:
    """Direct sum of up to max_blocks distinct blocks with small multiplicities.

    Deterministic in the seed; the returned multiset is the exact ground
    truth the decomposer must recover.
    """
    rng = random.Random(f"block-sum:{seed}")
    pool = enumerate_blocks(grid)
    count = rng.randint(0, max_blocks) if max_blocks > 0 else 0
    count = min(count, len(pool))
    chosen = sorted(rng.sample(range(len(pool)), count))
    multiset = tuple(
        (pool[i], rng.randint(1, max_mult) if max_mult > 1 else 1) for i in chosen
    )
    module = zero_module(field, grid)
    for blk, mult in multiset:
        piece = block_module(field, grid, blk)
        for _ in range(mult):
            module = direct_sum(module, piece)
    return GroundTruth(module, multiset)


def counterexample(field: PrimeField | None = None) -> GridModule:
    """The 2x2x2 module that is valid and commutative but not decomposable.

    Three lines feed the two-dimensional top corner through the maps
    (1,0), (0,1) and (1,1); the colimit comparison map at the full cube
    fails to be injective, while every slice and the limit comparison map
    pass.
    """
    field = field or PrimeField()
    grid = Grid((2, 2, 2))
    dims = {t: 0 for t in grid.points()}
    dims[(2, 2, 1)] = 1
    dims[(2, 1, 2)] = 1
    dims[(1, 2, 2)] = 1
    dims[(2, 2, 2)] = 2
    steps = {}
    for t in grid.points():
        for axis in AXES:
            if t[axis - 1] >= grid.cells[axis - 1]:
                continue
            u = _step(t, axis)
            steps[(axis, t)] = Matrix.zeros(field, dims[u], dims[t])
    steps[(1, (1, 2, 2))] = Matrix(field, [[1], [0]])
    steps[(2, (2, 1, 2))] = Matrix(field, [[0], [1]])
    steps[(3, (2, 2, 1))] = Matrix(field, [[1], [1]])
    return GridModule(field, grid, dims, steps)


def _square_keys(t: GridPoint, i: int, j: int):
    """Step keys of the commuting square with base t on axes i < j.

    Returns (A, C, B, D) where the square condition is B after A = D after C.
    """
    return (
        (i, t),
        (j, t),
        (j, _step(t, i)),
        (i, _step(t, j)),
    )


def _broken_squares(grid: Grid, steps) -> list[tuple[GridPoint, int, int]]:
    out = []
    for t in grid.points():
        for i, j in ((1, 2), (1, 3), (2, 3)):
            if t[i - 1] >= grid.cells[i - 1] or t[j - 1] >= grid.cells[j - 1]:
                continue
            a, c, b, d = _square_keys(t, i, j)
            if steps[b] @ steps[a] != steps[d] @ steps[c]:
                out.append((t, i, j))
    return out


def _repair(grid: Grid, steps, mutated_key, max_sweeps: int = 12) -> bool:
    """Rewrite step maps later than the mutation until all squares commute.

    Each broken square is repaired by re-deriving the latest rewritable map
    from the composite through the other three, when the linear system is
    solvable.  Returns False when the cascade stalls or hits an unsolvable
    constraint.
    """
    for _ in range(max_sweeps):
        broken = _broken_squares(grid, steps)
        if not broken:
            return True
        changed = False
        for (t, i, j) in broken:
            a, c, b, d = _square_keys(t, i, j)
            if steps[b] @ steps[a] == steps[d] @ steps[c]:
                continue
            rewritable = sorted(k for k in (a, c, b, d) if k > mutated_key)
            fixed_this = False
            while rewritable and not fixed_this:
                key = rewritable.pop()
                if key == b:
                    sol = solve_right(steps[a].transpose(), (steps[d] @ steps[c]).transpose())
                elif key == d:
                    sol = solve_right(steps[c].transpose(), (steps[b] @ steps[a]).transpose())
                elif key == a:
                    sol = solve_right(steps[b], steps[d] @ steps[c])
                else:  # key == c
                    sol = solve_right(steps[d], steps[b] @ steps[a])
                if sol is None:
                    continue
                steps[key] = sol.transpose() if key in (b, d) else sol
                changed = True
                fixed_this = True
            if not fixed_this:
                return False
        if not changed:
            return False
    return not _broken_squares(grid, steps)


def perturb(module: GridModule, seed: int, budget: int = 500) -> GridModule:
    """Mutate one step-map entry and repair commutativity; always valid output.

    Candidates whose repair cascade fails are discarded and resampled.  A
    module with no step entries (e.g. the zero module) is returned unchanged.
    Raises PerturbBudgetError when the budget is exhausted.
    """
    rng = random.Random(f"perturb:{seed}")
    p = module.field.p
    keys = [k for k in module.step_keys() if module.step(*k).data.size > 0]
    if not keys:
        return module
    for _ in range(budget):
        key = rng.choice(keys)
        base = module.step(*key)
        r = rng.randrange(base.rows)
        c = rng.randrange(base.cols)
        old = int(base.data[r, c])
        new = (old + 1 + rng.randrange(p - 1)) % p
        data = base.data.copy()
        data[r, c] = new
        steps = {k: module.step(*k) for k in module.step_keys()}
        steps[key] = Matrix(module.field, data)
        if _repair(module.grid, steps, key):
            candidate = GridModule(module.field, module.grid, module.dims, steps)
            if candidate.validate().ok:
                return candidate
    raise PerturbBudgetError(f"no repairable mutation found in {budget} attempts")
