"""Strong-exactness checking for 2-parameter slices and 3-parameter cubes.

A commuting square

        B ---g1--> D
        ^          ^
        f1         g2
        |          |
        A ---f2--> C

is middle exact when A -> B (+) C -> D is exact, which is equivalent both to
surjectivity of the induced map onto the pullback of (g1, g2) and to
injectivity of the induced map out of the pushout of (f1, f2).  The three
predicates below decide these by deliberately different computations so that
their agreement is a meaningful cross-check.

A 3-parameter module is strongly exact when every axis slice is 2-parameter
strongly exact and, for the cube spanned by every pair s < t (strict on all
three axes), the canonical map into the limit of the seven upper corners is
surjective and the canonical map from the colimit of the seven lower corners
is injective.  Cubes with a repeated coordinate impose nothing beyond the
corresponding square condition, so the checker delegates them to the slice
sweep.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .grid import GridModule, GridPoint, SliceModule
from .linalg import Matrix, hstack, rank, vstack
from .linalg import _eliminate  # shared elimination core

__all__ = [
    "SquareDiagram",
    "CubeDiagram",
    "SliceFailure",
    "CubeFailure",
    "ExactnessReport",
    "InvalidModuleError",
    "square_exact",
    "square_pullback_surjective",
    "square_pushout_injective",
    "slice_strongly_exact",
    "check_strong_exactness",
    "limit_map_surjective",
    "colimit_map_injective",
]


class InvalidModuleError(ValueError):
    """Raised when an operation requires a validated module and gets a broken one."""

    def __init__(self, report):
        super().__init__(f"module does not validate: {report}")
        self.report = report


@dataclass(frozen=True)
class SquareDiagram:
    """Maps f1: A->B, f2: A->C, g1: B->D, g2: C->D with g1 f1 = g2 f2."""

    f1: Matrix
    f2: Matrix
    g1: Matrix
    g2: Matrix

    def __post_init__(self) -> None:
        if self.f1.cols != self.f2.cols:
            raise ValueError("f1 and f2 must share the domain A")
        if self.g1.rows != self.g2.rows:
            raise ValueError("g1 and g2 must share the codomain D")
        if self.g1.cols != self.f1.rows:
            raise ValueError("g1 must consume the codomain of f1")
        if self.g2.cols != self.f2.rows:
            raise ValueError("g2 must consume the codomain of f2")

    def commutes(self) -> bool:
        return self.g1 @ self.f1 == self.g2 @ self.f2

    def dims(self) -> tuple[int, int, int, int]:
        return (self.f1.cols, self.f1.rows, self.f2.rows, self.g1.rows)


def _require_commuting(sq: SquareDiagram) -> None:
    if not sq.commutes():
        raise ValueError("square does not commute")


def _middle_exact(f1: Matrix, f2: Matrix, g1: Matrix, g2: Matrix) -> bool:
    # im(f1; f2) is contained in ker(g1 | -g2) by commutativity; exactness is
    # then purely a rank condition.
    dim_bc = f1.rows + f2.rows
    if dim_bc == 0:
        return True
    r_in = rank(vstack([f1, f2]))
    r_out = rank(hstack([g1, -g2]))
    return r_in == dim_bc - r_out


def square_exact(sq: SquareDiagram) -> bool:
    """Exactness of A -> B (+) C -> D at the middle term."""
    _require_commuting(sq)
    return _middle_exact(sq.f1, sq.f2, sq.g1, sq.g2)


def square_pullback_surjective(sq: SquareDiagram) -> bool:
    """Is A -> {(b, c) : g1 b = g2 c} onto?  Decided by subspace containment."""
    _require_commuting(sq)
    pullback = hstack([sq.g1, -sq.g2]).kernel()
    image = vstack([sq.f1, sq.f2]).image()
    return image.contains_subspace(pullback)


def square_pushout_injective(sq: SquareDiagram) -> bool:
    """Is (B (+) C)/(f1 a ~ f2 a) -> D injective?

    Injectivity means every (b, c) with g1 b + g2 c = 0 already lies in the
    subspace of relations spanned by (f1 a, -f2 a).
    """
    _require_commuting(sq)
    ker = hstack([sq.g1, sq.g2]).kernel()
    relations = vstack([sq.f1, -sq.f2]).image()
    return relations.contains_subspace(ker)


@dataclass(frozen=True)
class SliceFailure:
    axis: int
    index: int
    x: tuple[int, int]
    y: tuple[int, int]

    def to_doc(self) -> dict:
        return {"axis": self.axis, "index": self.index, "x": list(self.x), "y": list(self.y)}


@dataclass(frozen=True)
class CubeFailure:
    s: GridPoint
    t: GridPoint
    condition: str  # "limit-surjective" | "colimit-injective"

    def to_doc(self) -> dict:
        return {"s": list(self.s), "t": list(self.t), "condition": self.condition}


@dataclass
class ExactnessReport:
    slice_failures: list[SliceFailure] = dataclass_field(default_factory=list)
    cube_failures: list[CubeFailure] = dataclass_field(default_factory=list)
    mode: str = "exhaustive"

    @property
    def overall(self) -> bool:
        return not self.slice_failures and not self.cube_failures

    def to_doc(self) -> dict:
        return {
            "overall": self.overall,
            "mode": self.mode,
            "slice_failures": [f.to_doc() for f in self.slice_failures],
            "cube_failures": [f.to_doc() for f in self.cube_failures],
        }

    def __str__(self) -> str:
        if self.overall:
            return "strongly exact"
        lines = []
        for f in self.slice_failures:
            lines.append(
                f"slice axis {f.axis} cell {f.index}: square {f.x} -> {f.y} not exact"
            )
        for f in self.cube_failures:
            lines.append(f"cube {f.s} -> {f.t}: {f.condition} condition fails")
        return "\n".join(lines)


def _slice_square(sl: SliceModule, x, y) -> tuple[Matrix, Matrix, Matrix, Matrix]:
    bx = (x[0], y[1])
    cx = (y[0], x[1])
    f1 = sl.transition(x, bx)
    f2 = sl.transition(x, cx)
    g1 = sl.transition(bx, y)
    g2 = sl.transition(cx, y)
    return f1, f2, g1, g2


def slice_strongly_exact(sl: SliceModule, unit_only: bool = False) -> list[SliceFailure]:
    """All rectangles of the slice failing middle exactness.

    Rectangles with a repeated coordinate are exact automatically, so only
    pairs strict on both slice axes are examined.
    """
    failures = []
    n1, n2 = sl.cells
    axis = sl.parent_axis or 0
    index = sl.parent_index or 0
    for x1 in range(1, n1):
        for x2 in range(1, n2):
            y1_range = (x1 + 1,) if unit_only else range(x1 + 1, n1 + 1)
            for y1 in y1_range:
                y2_range = (x2 + 1,) if unit_only else range(x2 + 1, n2 + 1)
                for y2 in y2_range:
                    x, y = (x1, x2), (y1, y2)
                    if not _middle_exact(*_slice_square(sl, x, y)):
                        failures.append(SliceFailure(axis, index, x, y))
    return failures


_BITS = (1, 2, 4)
_UPPER = tuple(range(1, 8))
_LOWER = tuple(range(0, 7))
_UPPER_ARROWS = tuple(
    (m, m | b) for m in _UPPER for b in _BITS if not m & b and (m | b) in _UPPER
)
_LOWER_ARROWS = tuple(
    (m, m | b) for m in _LOWER for b in _BITS if not m & b and (m | b) in _LOWER
)


class CubeDiagram:
    """The commuting cube spanned by s <= t: 8 corner spaces and 12 edge maps.

    Corners are indexed by bitmasks 0..7; bit i set means coordinate i has
    advanced from s to t.
    """

    def __init__(self, field, dims: dict[int, int], edges: dict[tuple[int, int], Matrix],
                 s: GridPoint | None = None, t: GridPoint | None = None):
        self.field = field
        self.dims = dict(dims)
        self.edges = dict(edges)
        self.s = s
        self.t = t
        for mask in range(8):
            for bit in _BITS:
                if not mask & bit:
                    e = self.edges[(mask, mask | bit)]
                    if e.shape != (self.dims[mask | bit], self.dims[mask]):
                        raise ValueError(f"edge {mask}->{mask | bit} has shape {e.shape}")

    @classmethod
    def from_module(cls, module: GridModule, s: GridPoint, t: GridPoint) -> "CubeDiagram":
        if any(si > ti for si, ti in zip(s, t)):
            raise ValueError(f"cube requires s <= t, got {s} and {t}")

        def corner(mask: int) -> GridPoint:
            return tuple(ti if mask & (1 << i) else si for i, (si, ti) in enumerate(zip(s, t)))

        dims = {mask: module.dim(corner(mask)) for mask in range(8)}
        edges = {}
        for mask in range(8):
            for bit in _BITS:
                if not mask & bit:
                    edges[(mask, mask | bit)] = module.transition(corner(mask), corner(mask | bit))
        return cls(module.field, dims, edges, s=s, t=t)

    def map_between(self, src: int, dst: int) -> Matrix:
        """Composite of edges from one corner to a higher one (ascending bit order)."""
        if src & ~dst:
            raise ValueError(f"corner {src} is not below corner {dst}")
        out = Matrix.identity(self.field, self.dims[src])
        cur = src
        for bit in _BITS:
            if dst & bit and not cur & bit:
                out = self.edges[(cur, cur | bit)] @ out
                cur |= bit
        return out

    def commutes(self) -> bool:
        for mask in range(8):
            for i, bi in enumerate(_BITS):
                for bj in _BITS[i + 1 :]:
                    if mask & bi or mask & bj:
                        continue
                    one = self.edges[(mask | bi, mask | bi | bj)] @ self.edges[(mask, mask | bi)]
                    two = self.edges[(mask | bj, mask | bi | bj)] @ self.edges[(mask, mask | bj)]
                    if one != two:
                        return False
        return True


def _rank_array(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    r, _ = _eliminate(a, p, reduce_above=False)
    return r


def _limit_surjective(cube: CubeDiagram) -> bool:
    """Surjectivity of the bottom corner onto the limit of the punctured upper cube.

    The limit is the kernel of the constraint map E that compares, for each
    of the nine covering arrows of the upper poset, the value transported
    along the arrow with the value stored at the target.
    """
    p = cube.field.p
    offs = {}
    tot = 0
    for m in _UPPER:
        offs[m] = tot
        tot += cube.dims[m]
    if tot == 0:
        return True
    rows = sum(cube.dims[b] for (_, b) in _UPPER_ARROWS)
    E = np.zeros((rows, tot), dtype=np.int64)
    r0 = 0
    for (a, b) in _UPPER_ARROWS:
        db = cube.dims[b]
        if db:
            E[r0 : r0 + db, offs[a] : offs[a] + cube.dims[a]] = cube.edges[(a, b)].data
            E[r0 : r0 + db, offs[b] : offs[b] + db] = (-np.eye(db, dtype=np.int64)) % p
        r0 += db
    limit_dim = tot - _rank_array(E, p)
    into_upper = np.zeros((tot, cube.dims[0]), dtype=np.int64)
    for m in _UPPER:
        if cube.dims[m]:
            into_upper[offs[m] : offs[m] + cube.dims[m], :] = cube.map_between(0, m).data
    # the image of the bottom corner always lands inside the limit
    return _rank_array(into_upper, p) == limit_dim


def _colimit_injective(cube: CubeDiagram) -> bool:
    """Injectivity of the colimit of the punctured lower cube into the top corner.

    With D the relation map of the nine covering arrows of the lower poset
    and T the summed map of the seven lower corners into the top corner, the
    image of D always lies inside the kernel of T; injectivity of the induced
    map holds exactly when the two agree, i.e. when their ranks match.
    """
    p = cube.field.p
    offs = {}
    tot = 0
    for m in _LOWER:
        offs[m] = tot
        tot += cube.dims[m]
    if tot == 0:
        return True
    cols = sum(cube.dims[a] for (a, _) in _LOWER_ARROWS)
    D = np.zeros((tot, cols), dtype=np.int64)
    c0 = 0
    for (a, b) in _LOWER_ARROWS:
        da = cube.dims[a]
        if da:
            D[offs[b] : offs[b] + cube.dims[b], c0 : c0 + da] = cube.edges[(a, b)].data
            D[offs[a] : offs[a] + da, c0 : c0 + da] = (-np.eye(da, dtype=np.int64)) % p
        c0 += da
    onto_top = np.zeros((cube.dims[7], tot), dtype=np.int64)
    for m in _LOWER:
        if cube.dims[m]:
            onto_top[:, offs[m] : offs[m] + cube.dims[m]] = cube.map_between(m, 7).data
    ker_dim = tot - _rank_array(onto_top, p)
    return _rank_array(D, p) == ker_dim


def limit_map_surjective(cube: CubeDiagram, check_commutes: bool = True) -> bool:
    if check_commutes and not cube.commutes():
        raise ValueError("cube does not commute")
    return _limit_surjective(cube)


def colimit_map_injective(cube: CubeDiagram, check_commutes: bool = True) -> bool:
    if check_commutes and not cube.commutes():
        raise ValueError("cube does not commute")
    return _colimit_injective(cube)


def check_strong_exactness(module: GridModule, mode: str = "exhaustive") -> ExactnessReport:
    """Decide 3-parameter strong exactness, collecting every failure witness.

    In exhaustive mode all rectangles of all slices and all strict cubes are
    checked; this is the ground-truth mode.  The "unit-cells" mode inspects
    only unit squares and unit cubes and is a heuristic: it is not known to
    imply the exhaustive condition.
    """
    if mode not in ("exhaustive", "unit-cells"):
        raise ValueError(f"unknown mode {mode!r}")
    validation = module.validate()
    if not validation.ok:
        raise InvalidModuleError(validation)
    unit_only = mode == "unit-cells"
    report = ExactnessReport(mode=mode)
    for axis in (1, 2, 3):
        for index in range(1, module.grid.cells[axis - 1] + 1):
            sl = module.restrict_slice(axis, index)
            report.slice_failures.extend(slice_strongly_exact(sl, unit_only=unit_only))
    m1, m2, m3 = module.grid.cells
    for s in sorted(module.grid.points()):
        t1r = (s[0] + 1,) if unit_only else range(s[0] + 1, m1 + 1)
        for t1 in t1r:
            if t1 > m1:
                continue
            t2r = (s[1] + 1,) if unit_only else range(s[1] + 1, m2 + 1)
            for t2 in t2r:
                if t2 > m2:
                    continue
                t3r = (s[2] + 1,) if unit_only else range(s[2] + 1, m3 + 1)
                for t3 in t3r:
                    if t3 > m3:
                        continue
                    t = (t1, t2, t3)
                    cube = CubeDiagram.from_module(module, s, t)
                    if not _limit_surjective(cube):
                        report.cube_failures.append(CubeFailure(s, t, "limit-surjective"))
                    if not _colimit_injective(cube):
                        report.cube_failures.append(CubeFailure(s, t, "colimit-injective"))
    report.slice_failures.sort(key=lambda f: (f.axis, f.index, f.x, f.y))
    report.cube_failures.sort(key=lambda f: (f.s, f.t, f.condition))
    return report
