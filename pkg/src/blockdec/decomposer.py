"""Block decomposition of strongly exact modules via counting dimensions.

For a cuboid C containing a point t, each axis contributes four subspaces of
the space at t: the images from just inside and just below the cuboid's lower
cut, and the kernels to just beyond and just within its upper cut.  Combined
over the three axes these produce nested pairs

    im_minus <= im_plus,   ker_minus <= ker_plus,

and the core spaces

    core_plus  = im_plus & ker_plus
    core_minus = im_plus & ker_minus + im_minus & ker_plus.

On a strongly exact module, dim core_plus - dim core_minus is constant over
the cuboid's points and equals the multiplicity of the corresponding block
summand.  A deterministic complement of core_minus (the block's "germ",
chosen at its minimal corner) transports to an explicit submodule supported
exactly on the block; stacking every extracted submodule recovers the whole
module, which the verifier checks by a pointwise rank computation.

Infinity conventions of the finite grid: the image from below an empty lower
cut is the zero subspace, and the kernel beyond an empty upper cut is the
full space (the module extends by zero past the last breakpoint).
"""

from __future__ import annotations

from dataclasses import dataclass
from .blocks import BIRTH, DEATH, LAYER, AxisInterval, Block, Cuboid, enumerate_blocks
from .exactness import ExactnessReport, check_strong_exactness
from .grid import Grid, GridModule, GridPoint, _with_coord
from .linalg import Subspace

__all__ = [
    "AxisLimits",
    "LimitCache",
    "BlockSections",
    "Submodule",
    "ConservationRow",
    "DecompositionReport",
    "Decomposer",
    "NotStronglyExactError",
    "DecompositionError",
    "axis_limits",
    "block_sections",
    "decompose",
    "multiplicity",
    "extract_submodule",
    "death_residual",
    "verify_direct_sum",
]


class NotStronglyExactError(ValueError):
    """The operation requires a strongly exact module; the witness report is attached."""

    def __init__(self, report: ExactnessReport):
        super().__init__("module is not 3-parameter strongly exact")
        self.report = report


class DecompositionError(RuntimeError):
    """An internal consistency check of the decomposition failed.

    This never indicates bad user input: it means a hypothesis the
    decomposition relies on was violated, i.e. a bug somewhere.
    """


@dataclass(frozen=True)
class AxisLimits:
    """Images and kernels along one axis for one interval, at one point."""

    im_plus: Subspace
    im_minus: Subspace
    ker_plus: Subspace
    ker_minus: Subspace


@dataclass(frozen=True)
class BlockSections:
    """The combined subspaces of a cuboid at a point (all in the space at t)."""

    im_plus: Subspace
    im_minus: Subspace
    ker_plus: Subspace
    ker_minus: Subspace
    core_plus: Subspace
    core_minus: Subspace

    @property
    def section_plus(self) -> Subspace:
        return self.im_minus + self.core_plus

    @property
    def section_minus(self) -> Subspace:
        return self.im_minus + self.core_minus

    @property
    def counting(self) -> int:
        return self.core_plus.dim - self.core_minus.dim


def _as_cuboid(blk) -> Cuboid:
    if isinstance(blk, Block):
        return blk.intervals
    ivs = tuple(iv if isinstance(iv, AxisInterval) else AxisInterval(*iv) for iv in blk)
    if len(ivs) != 3:
        raise ValueError("a cuboid needs exactly three axis intervals")
    return ivs


def _cuboid_contains(cuboid: Cuboid, t: GridPoint) -> bool:
    return all(iv.contains_cell(ti) for iv, ti in zip(cuboid, t))


class LimitCache:
    """Shared image/kernel/axis-limit computations over one module, memoized."""

    def __init__(self, module: GridModule):
        self.module = module
        self._images: dict[tuple[GridPoint, GridPoint], Subspace] = {}
        self._kernels: dict[tuple[GridPoint, GridPoint], Subspace] = {}

    def image(self, s: GridPoint, t: GridPoint) -> Subspace:
        key = (s, t)
        out = self._images.get(key)
        if out is None:
            out = self.module.transition(s, t).image()
            self._images[key] = out
        return out

    def kernel(self, s: GridPoint, t: GridPoint) -> Subspace:
        key = (s, t)
        out = self._kernels.get(key)
        if out is None:
            out = self.module.transition(s, t).kernel()
            self._kernels[key] = out
        return out

    def axis_limits(self, axis: int, interval: AxisInterval, t: GridPoint) -> AxisLimits:
        module = self.module
        mi = module.grid.cells[axis - 1]
        ti = t[axis - 1]
        if interval.b > mi:
            raise ValueError(f"interval {interval} exceeds axis {axis} size {mi}")
        if not interval.contains_cell(ti):
            raise ValueError(f"point {t} lies outside interval {interval} on axis {axis}")
        field = module.field
        d = module.dim(t)
        im_plus = self.image(_with_coord(t, axis, interval.a + 1), t)
        if interval.a >= 1:
            im_minus = self.image(_with_coord(t, axis, interval.a), t)
        else:
            im_minus = Subspace.zero(field, d)
        if interval.b < mi:
            ker_plus = self.kernel(t, _with_coord(t, axis, interval.b + 1))
        else:
            ker_plus = Subspace.full(field, d)
        ker_minus = self.kernel(t, _with_coord(t, axis, interval.b))
        return AxisLimits(im_plus, im_minus, ker_plus, ker_minus)

    def sections(self, cuboid: Cuboid, t: GridPoint) -> BlockSections:
        if not _cuboid_contains(cuboid, t):
            raise ValueError(f"point {t} is not inside the cuboid")
        ax = [self.axis_limits(i + 1, cuboid[i], t) for i in range(3)]
        im_plus = ax[0].im_plus & ax[1].im_plus & ax[2].im_plus
        im_minus = (
            (ax[0].im_minus & ax[1].im_plus & ax[2].im_plus)
            + (ax[0].im_plus & ax[1].im_minus & ax[2].im_plus)
            + (ax[0].im_plus & ax[1].im_plus & ax[2].im_minus)
        )
        ker_minus = ax[0].ker_minus + ax[1].ker_minus + ax[2].ker_minus
        ker_plus = ker_minus + (ax[0].ker_plus & ax[1].ker_plus & ax[2].ker_plus)
        core_plus = im_plus & ker_plus
        core_minus = (im_plus & ker_minus) + (im_minus & ker_plus)
        return BlockSections(im_plus, im_minus, ker_plus, ker_minus, core_plus, core_minus)


def axis_limits(module: GridModule, axis: int, interval, t: GridPoint) -> AxisLimits:
    """Images from inside/below the lower cut and kernels beyond/within the upper cut."""
    iv = interval if isinstance(interval, AxisInterval) else AxisInterval(*interval)
    return LimitCache(module).axis_limits(axis, iv, t)


def block_sections(module: GridModule, blk, t: GridPoint) -> BlockSections:
    """Combined cuboid subspaces at t.  Accepts a Block or any interval triple."""
    return LimitCache(module).sections(_as_cuboid(blk), t)


@dataclass
class Submodule:
    """A transition-closed family of subspaces of a parent module."""

    module: GridModule
    spaces: dict[GridPoint, Subspace]
    block: Block | None = None
    germ: Subspace | None = None

    def dim_at(self, t: GridPoint) -> int:
        return self.spaces[t].dim

    def closure_failures(self) -> list[tuple[GridPoint, int]]:
        """Axis-adjacent pairs where the step image escapes the submodule."""
        out = []
        for t in self.module.grid.points():
            for axis in (1, 2, 3):
                if t[axis - 1] >= self.module.grid.cells[axis - 1]:
                    continue
                u = _with_coord(t, axis, t[axis - 1] + 1)
                image = self.module.step(axis, t).image_of(self.spaces[t])
                if not self.spaces[u].contains_subspace(image):
                    out.append((t, axis))
        return out


@dataclass(frozen=True)
class ConservationRow:
    at: GridPoint
    dim: int
    expected: int

    @property
    def ok(self) -> bool:
        return self.dim == self.expected

    def to_doc(self) -> dict:
        return {
            "at": [c - 1 for c in self.at],
            "dim": self.dim,
            "expected": self.expected,
            "ok": self.ok,
        }


@dataclass
class DecompositionReport:
    """Multiset of blocks with multiplicities plus the conservation table."""

    grid: Grid
    entries: list[tuple[Block, int]]
    verified: bool
    conservation: list[ConservationRow]

    def multiset(self) -> dict:
        return {blk.intervals: mult for blk, mult in self.entries}

    def to_doc(self) -> dict:
        return {
            "verified": self.verified,
            "entries": [
                dict(blk.to_doc(), multiplicity=mult) for blk, mult in self.entries
            ],
            "dims_check": [row.to_doc() for row in self.conservation],
        }

    @classmethod
    def from_doc(cls, grid: Grid, doc: dict) -> "DecompositionReport":
        entries = []
        for e in doc.get("entries", []):
            mult = int(e["multiplicity"])
            if mult < 1:
                raise ValueError(f"multiplicity must be positive, got {mult}")
            entries.append((Block.from_doc(grid, e), mult))
        entries.sort(key=lambda em: em[0].sort_key())
        conservation = [
            ConservationRow(
                tuple(c + 1 for c in row["at"]), int(row["dim"]), int(row["expected"])
            )
            for row in doc.get("dims_check", [])
        ]
        return cls(grid, entries, bool(doc.get("verified", False)), conservation)


def _conservation(grid: Grid, dims, entries) -> list[ConservationRow]:
    rows = []
    for t in sorted(grid.points()):
        expected = sum(mult for blk, mult in entries if blk.contains(t))
        rows.append(ConservationRow(t, dims[t], expected))
    return rows


class Decomposer:
    """Counting, extraction and verification over one module.

    The strong-exactness check runs once at construction; every counting
    operation refuses to produce numbers for a module that failed it, since
    the counting dimension has no meaning there.
    """

    def __init__(self, module: GridModule, exactness: ExactnessReport | None = None):
        self.module = module
        self.exactness = exactness if exactness is not None else check_strong_exactness(module)
        self.limits = LimitCache(module)

    @property
    def strongly_exact(self) -> bool:
        return self.exactness.overall

    def _require_exact(self) -> None:
        if not self.exactness.overall:
            raise NotStronglyExactError(self.exactness)

    def sections(self, blk, t: GridPoint) -> BlockSections:
        return self.limits.sections(_as_cuboid(blk), t)

    def multiplicity(self, blk, t: GridPoint | None = None) -> int:
        """dim core_plus - dim core_minus, evaluated at the minimal corner.

        Constant over the cuboid's points for strongly exact modules; the
        test suite asserts the constancy rather than assuming it.
        """
        self._require_exact()
        cuboid = _as_cuboid(blk)
        if t is None:
            t = tuple(iv.a + 1 for iv in cuboid)
        return self.limits.sections(cuboid, t).counting

    def decompose(self) -> DecompositionReport:
        """Counting over all blocks, plus the mandatory conservation check."""
        self._require_exact()
        entries = []
        for blk in enumerate_blocks(self.module.grid):
            mult = self.multiplicity(blk)
            if mult > 0:
                entries.append((blk, mult))
        conservation = _conservation(self.module.grid, self.module.dims, entries)
        verified = all(row.ok for row in conservation)
        return DecompositionReport(self.module.grid, entries, verified, conservation)

    def _ker_core(self, blk: Block, t: GridPoint) -> Subspace:
        """The kind-specific space inside which the germ complement is chosen."""
        ax = [self.limits.axis_limits(i + 1, blk.intervals[i], t) for i in range(3)]
        if blk.kind == DEATH:
            return ax[0].ker_plus & ax[1].ker_plus & ax[2].ker_plus
        if blk.kind in LAYER:
            i = LAYER.index(blk.kind)
            return ax[i].im_plus & ax[i].ker_plus
        raise ValueError(f"no kernel core for kind {blk.kind}")

    def germ(self, blk: Block) -> Subspace:
        """Deterministic complement of core_minus generating the block submodule."""
        self._require_exact()
        t0 = blk.min_corner()
        secs = self.limits.sections(blk.intervals, t0)
        try:
            if blk.kind == BIRTH:
                germ = secs.core_minus.complement_in(secs.core_plus)
            else:
                ker_core = self._ker_core(blk, t0)
                inner = secs.core_minus & ker_core
                germ = inner.complement_in(ker_core)
        except ValueError as exc:
            raise DecompositionError(
                f"complement construction failed for {blk.to_doc()} at {t0}: {exc}"
            ) from exc
        if blk.kind != BIRTH:
            if not secs.core_plus.contains_subspace(germ):
                raise DecompositionError(
                    f"germ of {blk.to_doc()} escapes core_plus at {t0}"
                )
            if (secs.core_minus + germ) != secs.core_plus or not (secs.core_minus & germ).is_zero():
                raise DecompositionError(
                    f"germ of {blk.to_doc()} fails the complement equations at {t0}"
                )
        if germ.dim != secs.counting:
            raise DecompositionError(
                f"germ of {blk.to_doc()} has dim {germ.dim}, counting {secs.counting}"
            )
        return germ

    def extract(self, blk: Block) -> Submodule:
        """The explicit submodule supported on the block, generated by its germ.

        Raises DecompositionError when the transported spaces violate their
        required dimensions or fail to die across the block boundary.
        """
        self._require_exact()
        t0 = blk.min_corner()
        germ = self.germ(blk)
        mult = germ.dim
        field = self.module.field
        spaces: dict[GridPoint, Subspace] = {}
        for t in self.module.grid.points():
            if blk.contains(t):
                spaces[t] = self.module.transition(t0, t).image_of(germ)
                if spaces[t].dim != mult:
                    raise DecompositionError(
                        f"extracted space at {t} has dim {spaces[t].dim}, expected {mult}"
                    )
            else:
                spaces[t] = Subspace.zero(field, self.module.dim(t))
        for t in blk.points():
            for axis in (1, 2, 3):
                if t[axis - 1] >= self.module.grid.cells[axis - 1]:
                    continue
                u = _with_coord(t, axis, t[axis - 1] + 1)
                if blk.contains(u):
                    continue
                image = self.module.step(axis, t).image_of(spaces[t])
                if not image.is_zero():
                    raise DecompositionError(
                        f"block {blk.to_doc()} fails to die crossing {t} -> {u}"
                    )
        return Submodule(self.module, spaces, block=blk, germ=germ)

    def death_residual(self) -> Submodule:
        """The submodule carrying the death-type part of the decomposition.

        Pointwise: the intersection of the image from the infinite past with
        the kernel of the map to the last breakpoint, taken with the trivial
        cuts of the full grid.
        """
        self._require_exact()
        full = Block.of(
            self.module.grid,
            tuple((0, m) for m in self.module.grid.cells),
        )
        spaces = {}
        for t in self.module.grid.points():
            ax = [self.limits.axis_limits(i + 1, full.intervals[i], t) for i in range(3)]
            im_plus = ax[0].im_plus & ax[1].im_plus & ax[2].im_plus
            ker_minus = ax[0].ker_minus + ax[1].ker_minus + ax[2].ker_minus
            spaces[t] = im_plus & ker_minus
        return Submodule(self.module, spaces, block=None, germ=None)

    def verify(self, report: DecompositionReport) -> bool:
        """Stack the claimed submodules and compare ranks with the module dims.

        Equality of the stacked rank and the pointwise dimension at every
        grid point proves simultaneously that the listed submodules span and
        are independent.  Multiplicities above the counting dimension are
        unrealizable and fail immediately.
        """
        self._require_exact()
        if report.grid != self.module.grid:
            raise ValueError("report grid does not match module grid")
        stacked: dict[GridPoint, list] = {t: [] for t in self.module.grid.points()}
        for blk, mult in report.entries:
            sub = self.extract(blk)
            if sub.germ is None or mult > sub.germ.dim:
                return False
            part = Subspace.spanned_by(
                self.module.field, sub.germ.ambient_dim, sub.germ.basis[:mult]
            )
            t0 = blk.min_corner()
            for t in blk.points():
                image = self.module.transition(t0, t).image_of(part)
                stacked[t].append(image)
        for t in self.module.grid.points():
            total = Subspace.zero(self.module.field, self.module.dim(t))
            count = 0
            for sp in stacked[t]:
                total = total + sp
                count += sp.dim
            if count != self.module.dim(t) or total.dim != self.module.dim(t):
                return False
        return True


def decompose(module: GridModule) -> DecompositionReport:
    return Decomposer(module).decompose()


def multiplicity(module: GridModule, blk, t: GridPoint | None = None) -> int:
    return Decomposer(module).multiplicity(blk, t)


def extract_submodule(module: GridModule, blk: Block) -> Submodule:
    return Decomposer(module).extract(blk)


def death_residual(module: GridModule) -> Submodule:
    return Decomposer(module).death_residual()


def verify_direct_sum(module: GridModule, report: DecompositionReport) -> bool:
    return Decomposer(module).verify(report)
