"""Exact dense linear algebra over GF(p).

Matrices are immutable-by-convention wrappers around int64 numpy arrays with
entries reduced mod p.  Subspaces are stored as reduced-row-echelon bases
with strictly increasing pivot columns, so two subspaces are equal exactly
when their stored bases are entrywise equal.  All operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .field import PrimeField

__all__ = [
    "Matrix",
    "Subspace",
    "RrefResult",
    "rref",
    "rank",
    "vstack",
    "hstack",
    "block_diag",
    "solve_right",
]


def _as_array(data, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    a = np.array(data, dtype=np.int64)
    if a.ndim == 1 and a.size == 0:
        a = a.reshape(0, cols if cols is not None else 0)
    if a.ndim != 2:
        raise ValueError(f"matrix data must be 2-dimensional, got shape {a.shape}")
    if rows is not None and a.shape[0] != rows:
        raise ValueError(f"expected {rows} rows, got {a.shape[0]}")
    if cols is not None and a.shape[1] != cols:
        raise ValueError(f"expected {cols} columns, got {a.shape[1]}")
    return a


def _mm(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact mod-p matrix product; falls back to object dtype if int64 could overflow."""
    inner = a.shape[1]
    if inner and inner * (p - 1) ** 2 >= 2**63:
        return (a.astype(object).dot(b.astype(object)) % p).astype(np.int64)
    return (a @ b) % p


def _eliminate(a: np.ndarray, p: int, reduce_above: bool) -> tuple[int, list[int]]:
    """In-place Gaussian elimination.  Returns (rank, pivot columns).

    With reduce_above the result is the reduced row echelon form (pivots
    normalized to 1, pivot columns cleared everywhere); otherwise only rows
    below each pivot are cleared, which is enough for rank.
    """
    rows, cols = a.shape
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
        if reduce_above:
            other = np.nonzero(a[:, c])[0]
            other = other[other != r]
        else:
            other = r + 1 + np.nonzero(a[r + 1 :, c])[0]
        if other.size:
            a[other] = (a[other] - np.outer(a[other, c], a[r])) % p
        pivots.append(c)
        r += 1
    return r, pivots


class Matrix:
    """A rows x cols matrix over GF(p).  Entries live in [0, p)."""

    __slots__ = ("field", "data")

    def __init__(self, field: PrimeField, data, rows: int | None = None, cols: int | None = None):
        self.field = field
        a = _as_array(data, rows, cols)
        self.data = a % field.p
        self.data.setflags(write=False)

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "Matrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> "Matrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and np.array_equal(self.data, other.data)
        )

    def __hash__(self):
        return hash((self.field, self.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"Matrix(GF({self.field.p}), {self.data.tolist()})"

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._require_same_field(other)
        if self.cols != other.rows:
            raise ValueError(f"composition shape mismatch: {self.shape} @ {other.shape}")
        return Matrix(self.field, _mm(self.data, other.data, self.field.p))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._require_same_field(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} + {other.shape}")
        return Matrix(self.field, (self.data + other.data) % self.field.p)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._require_same_field(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} - {other.shape}")
        return Matrix(self.field, (self.data - other.data) % self.field.p)

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, (-self.data) % self.field.p)

    def _require_same_field(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise ValueError(f"field mismatch: GF({self.field.p}) vs GF({other.field.p})")

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.data.T.copy())

    def is_zero(self) -> bool:
        return not self.data.any()

    def apply(self, vector: Sequence[int]) -> np.ndarray:
        v = np.asarray(vector, dtype=np.int64) % self.field.p
        if v.shape != (self.cols,):
            raise ValueError(f"vector length {v.shape} does not match {self.cols} columns")
        return _mm(self.data, v.reshape(-1, 1), self.field.p).reshape(-1)

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("only square matrices can be inverted")
        n = self.rows
        aug = np.hstack([self.data.copy(), np.eye(n, dtype=np.int64)])
        _, pivots = _eliminate(aug, self.field.p, reduce_above=True)
        if pivots != list(range(n)):
            raise ValueError("matrix is singular")
        return Matrix(self.field, aug[:, n:])

    def is_invertible(self) -> bool:
        return self.rows == self.cols and rank(self) == self.rows

    def image(self) -> "Subspace":
        """Column space, as a subspace of the codomain."""
        return Subspace.spanned_by(self.field, self.rows, self.data.T)

    def kernel(self) -> "Subspace":
        """Null space {v : m v = 0}, as a subspace of the domain."""
        a = self.data.copy()
        r, pivots = _eliminate(a, self.field.p, reduce_above=True)
        p = self.field.p
        free = [c for c in range(self.cols) if c not in pivots]
        basis = np.zeros((len(free), self.cols), dtype=np.int64)
        for k, c in enumerate(free):
            basis[k, c] = 1
            for i, pc in enumerate(pivots):
                basis[k, pc] = (-a[i, c]) % p
        return Subspace.spanned_by(self.field, self.cols, basis)

    def image_of(self, space: "Subspace") -> "Subspace":
        """Image of a subspace of the domain, canonicalized in the codomain."""
        if space.ambient_dim != self.cols:
            raise ValueError(
                f"subspace ambient {space.ambient_dim} does not match {self.cols} columns"
            )
        rows = _mm(space.basis, self.data.T, self.field.p)
        return Subspace.spanned_by(self.field, self.rows, rows)

    def preimage_of(self, space: "Subspace") -> "Subspace":
        """{x : m x lies in the given subspace of the codomain}."""
        if space.ambient_dim != self.rows:
            raise ValueError(
                f"subspace ambient {space.ambient_dim} does not match {self.rows} rows"
            )
        # m x = basis^T c, i.e. (x, c) in the kernel of [m | -basis^T].
        stacked = np.hstack([self.data, (-space.basis.T) % self.field.p])
        ker = Matrix(self.field, stacked).kernel()
        return Subspace.spanned_by(self.field, self.cols, ker.basis[:, : self.cols])


@dataclass(frozen=True)
class RrefResult:
    reduced: Matrix
    rank: int
    pivots: tuple[int, ...]


def rref(m: Matrix) -> RrefResult:
    """Reduced row echelon form, preserving the input shape (zero rows kept)."""
    a = m.data.copy()
    r, pivots = _eliminate(a, m.field.p, reduce_above=True)
    return RrefResult(Matrix(m.field, a), r, tuple(pivots))


def rank(m: Matrix) -> int:
    a = m.data.copy()
    r, _ = _eliminate(a, m.field.p, reduce_above=False)
    return r


def vstack(matrices: Iterable[Matrix]) -> Matrix:
    ms = list(matrices)
    if not ms:
        raise ValueError("vstack of no matrices")
    field = ms[0].field
    cols = ms[0].cols
    for m in ms[1:]:
        if m.field != field or m.cols != cols:
            raise ValueError("vstack requires matching fields and column counts")
    return Matrix(field, np.vstack([m.data for m in ms]))


def hstack(matrices: Iterable[Matrix]) -> Matrix:
    ms = list(matrices)
    if not ms:
        raise ValueError("hstack of no matrices")
    field = ms[0].field
    rows = ms[0].rows
    for m in ms[1:]:
        if m.field != field or m.rows != rows:
            raise ValueError("hstack requires matching fields and row counts")
    return Matrix(field, np.hstack([m.data for m in ms]))


def block_diag(a: Matrix, b: Matrix) -> Matrix:
    a._require_same_field(b)
    out = np.zeros((a.rows + b.rows, a.cols + b.cols), dtype=np.int64)
    out[: a.rows, : a.cols] = a.data
    out[a.rows :, a.cols :] = b.data
    return Matrix(a.field, out)


def solve_right(a: Matrix, b: Matrix) -> Matrix | None:
    """A particular solution x of a @ x = b (free variables zero), or None."""
    a._require_same_field(b)
    if a.rows != b.rows:
        raise ValueError(f"row mismatch: {a.shape} vs {b.shape}")
    aug = np.hstack([a.data.copy(), b.data.copy()])
    r, pivots = _eliminate(aug, a.field.p, reduce_above=True)
    n = a.cols
    if any(c >= n for c in pivots):
        return None
    x = np.zeros((n, b.cols), dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = aug[i, n:]
    return Matrix(a.field, x)


class Subspace:
    """A subspace of GF(p)^n in canonical form.

    The basis is stored as the rows of a matrix in reduced row echelon form
    with strictly increasing pivot columns and no zero rows, which makes the
    representation unique: two subspaces are equal iff their bases are equal
    entrywise.
    """

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field: PrimeField, ambient_dim: int, rows=None):
        if ambient_dim < 0:
            raise ValueError("ambient dimension must be nonnegative")
        self.field = field
        self.ambient_dim = ambient_dim
        if rows is None:
            a = np.zeros((0, ambient_dim), dtype=np.int64)
            pivots: list[int] = []
        else:
            a = _as_array(rows, cols=ambient_dim) % field.p
            r, piv = _eliminate(a, field.p, reduce_above=True)
            a = a[:r]
            pivots = piv
        self.basis = a
        self.basis.setflags(write=False)
        self.pivots = tuple(pivots)

    @classmethod
    def zero(cls, field: PrimeField, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim)

    @classmethod
    def full(cls, field: PrimeField, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, np.eye(ambient_dim, dtype=np.int64))

    @classmethod
    def spanned_by(cls, field: PrimeField, ambient_dim: int, rows) -> "Subspace":
        return cls(field, ambient_dim, rows)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.basis.shape == other.basis.shape
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self.basis.tobytes()))

    def __repr__(self) -> str:
        return f"Subspace(GF({self.field.p}), dim {self.dim} of {self.ambient_dim})"

    def _require_same_ambient(self, other: "Subspace") -> None:
        if self.field != other.field:
            raise ValueError("field mismatch between subspaces")
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(
                f"ambient mismatch: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def reduce_vector(self, vector: Sequence[int]) -> np.ndarray:
        """Residue of a vector after subtracting its pivot components."""
        v = np.asarray(vector, dtype=np.int64) % self.field.p
        if v.shape != (self.ambient_dim,):
            raise ValueError(f"vector length {v.shape} does not match ambient {self.ambient_dim}")
        p = self.field.p
        for row, c in zip(self.basis, self.pivots):
            coef = int(v[c])
            if coef:
                v = (v - coef * row) % p
        return v

    def contains_vector(self, vector: Sequence[int]) -> bool:
        return not self.reduce_vector(vector).any()

    def contains_subspace(self, other: "Subspace") -> bool:
        self._require_same_ambient(other)
        if other.dim > self.dim:
            return False
        return all(self.contains_vector(row) for row in other.basis)

    def __le__(self, other: "Subspace") -> bool:
        return other.contains_subspace(self)

    def sum(self, other: "Subspace") -> "Subspace":
        """Smallest subspace containing both."""
        self._require_same_ambient(other)
        if other.dim == 0:
            return self
        if self.dim == 0:
            return other
        return Subspace(self.field, self.ambient_dim, np.vstack([self.basis, other.basis]))

    def __add__(self, other: "Subspace") -> "Subspace":
        return self.sum(other)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Largest subspace contained in both, via the stacked constraint kernel."""
        self._require_same_ambient(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        if self.is_full():
            return other
        if other.is_full():
            return self
        # w = basis_u^T a = basis_v^T b: solve [U^T | -V^T] (a; b) = 0.
        p = self.field.p
        constraint = np.hstack([self.basis.T, (-other.basis.T) % p])
        ker = Matrix(self.field, constraint).kernel()
        rows = _mm(ker.basis[:, : self.dim], self.basis, p)
        return Subspace(self.field, self.ambient_dim, rows)

    def __and__(self, other: "Subspace") -> "Subspace":
        return self.intersect(other)

    def complement_in(self, w: "Subspace") -> "Subspace":
        """A deterministic complement c of self inside w: c + self = w, c & self = 0.

        Extends this subspace's basis by a greedy scan of w's basis vectors in
        row order, so repeated runs pick the same complement.
        """
        self._require_same_ambient(w)
        if not w.contains_subspace(self):
            raise ValueError("complement_in requires the first subspace to lie inside the second")
        p = self.field.p
        current = self.basis.copy()
        picked: list[np.ndarray] = []
        cur_rank = self.dim
        for row in w.basis:
            if cur_rank == w.dim:
                break
            cand = np.vstack([current, row.reshape(1, -1)])
            r, _ = _eliminate(cand.copy(), p, reduce_above=False)
            if r > cur_rank:
                picked.append(row)
                current = cand
                cur_rank = r
        if cur_rank != w.dim:
            raise ValueError("complement construction failed to span")
        if picked:
            return Subspace(self.field, self.ambient_dim, np.vstack(picked))
        return Subspace.zero(self.field, self.ambient_dim)
