import pytest
from hypothesis import given, settings, strategies as st

from blockdec import Matrix, PrimeField, Subspace, rank, rref
from blockdec.linalg import block_diag, hstack, solve_right, vstack

GF5 = PrimeField(5)


def test_prime_field_rejects_composites():
    with pytest.raises(ValueError):
        PrimeField(1)
    with pytest.raises(ValueError):
        PrimeField(32004)
    with pytest.raises(ValueError):
        PrimeField(2**31 + 11)
    assert PrimeField(2).p == 2


def test_field_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        GF5.inv(0)
    assert GF5.inv(3) == 2


def test_rref_identity():
    m = Matrix.identity(GF5, 2)
    out = rref(m)
    assert out.reduced == m
    assert out.rank == 2
    assert out.pivots == (0, 1)


def test_rref_zero_matrix():
    m = Matrix.zeros(GF5, 3, 2)
    out = rref(m)
    assert out.reduced == m
    assert out.rank == 0
    assert out.pivots == ()


def test_rref_rank_one():
    out = rref(Matrix(GF5, [[1, 1], [1, 1]]))
    assert out.reduced == Matrix(GF5, [[1, 1], [0, 0]])
    assert out.rank == 1


def test_kernel_injective_map():
    assert Matrix.identity(GF5, 3).kernel() == Subspace.zero(GF5, 3)


def test_kernel_zero_map():
    assert Matrix.zeros(GF5, 2, 4).kernel() == Subspace.full(GF5, 4)


def test_kernel_hand_solved_system():
    ker = Matrix(GF5, [[1, 0, 1], [1, 1, 0]]).kernel()
    assert ker.dim == 1
    # (1, -1, -1) normalized in GF(5)
    assert ker == Subspace.spanned_by(GF5, 3, [[1, 4, 4]])


def test_image_basics():
    assert Matrix.identity(GF5, 3).image() == Subspace.full(GF5, 3)
    assert Matrix.zeros(GF5, 3, 2).image() == Subspace.zero(GF5, 3)
    line = Matrix(GF5, [[1], [1]]).image()
    assert line == Subspace.spanned_by(GF5, 2, [[1, 1]])


def test_subspace_sum():
    u = Subspace.spanned_by(GF5, 3, [[1, 0, 0]])
    zero = Subspace.zero(GF5, 3)
    assert u.sum(zero) == u
    l1 = Subspace.spanned_by(GF5, 2, [[1, 0]])
    l2 = Subspace.spanned_by(GF5, 2, [[1, 1]])
    assert (l1 + l2) == Subspace.full(GF5, 2)
    v = Subspace.spanned_by(GF5, 3, [[1, 1, 0]])
    assert (u + v).dim == 2


def test_subspace_intersect():
    u = Subspace.spanned_by(GF5, 2, [[1, 2]])
    assert u.intersect(Subspace.full(GF5, 2)) == u
    l1 = Subspace.spanned_by(GF5, 2, [[1, 0]])
    l2 = Subspace.spanned_by(GF5, 2, [[1, 1]])
    assert (l1 & l2).is_zero()
    a = Subspace.spanned_by(GF5, 3, [[1, 0, 0], [0, 1, 0]])
    b = Subspace.spanned_by(GF5, 3, [[0, 1, 1], [1, 0, 1]])
    meet = a & b
    assert meet.dim == 1
    assert a.contains_subspace(meet) and b.contains_subspace(meet)


def test_image_of_and_preimage_of():
    m = Matrix(GF5, [[1, 0, 0], [0, 1, 0]])  # projection of 3-space to a plane
    u = Subspace.spanned_by(GF5, 3, [[1, 1, 0], [0, 0, 1]])
    assert Matrix.identity(GF5, 3).image_of(u) == u
    assert Matrix.zeros(GF5, 2, 3).image_of(u).is_zero()
    assert m.image_of(u) == Subspace.spanned_by(GF5, 2, [[1, 1]])
    # preimages
    assert m.preimage_of(Subspace.full(GF5, 2)) == Subspace.full(GF5, 3)
    assert m.preimage_of(Subspace.zero(GF5, 2)) == m.kernel()
    line = Subspace.spanned_by(GF5, 2, [[1, 0]])
    pre = m.preimage_of(line)
    assert pre.dim == 2
    assert pre.contains_subspace(m.kernel())


def test_complement_in_edges():
    w = Subspace.spanned_by(GF5, 3, [[1, 0, 0], [0, 1, 0]])
    zero = Subspace.zero(GF5, 3)
    assert zero.complement_in(w) == w
    assert w.complement_in(w).is_zero()
    line = Subspace.spanned_by(GF5, 3, [[1, 1, 0]])
    comp = line.complement_in(w)
    assert comp.dim == 1
    assert (comp & line).is_zero()
    assert (comp + line) == w
    with pytest.raises(ValueError):
        w.complement_in(line)


def test_membership():
    u = Subspace.spanned_by(GF5, 2, [[1, 0]])
    assert u.contains_vector([0, 0])
    assert u.contains_vector([3, 0])
    assert not u.contains_vector([0, 1])


def test_matrix_composition_mismatch():
    with pytest.raises(ValueError):
        Matrix.identity(GF5, 2) @ Matrix.identity(GF5, 3)
    with pytest.raises(ValueError):
        Subspace.full(GF5, 2).sum(Subspace.full(GF5, 3))


def test_solve_right():
    a = Matrix(GF5, [[1, 2], [3, 4]])
    b = Matrix(GF5, [[1], [0]])
    x = solve_right(a, b)
    assert x is not None and a @ x == b
    # inconsistent system
    sing = Matrix(GF5, [[1, 1], [2, 2]])
    assert solve_right(sing, Matrix(GF5, [[0], [1]])) is None


def test_inverse_and_large_prime_matmul():
    big = PrimeField((1 << 31) - 1)  # Mersenne prime, exercises the object-dtype path
    m = Matrix(big, [[1, 2], [3, 4]])
    inv = m.inverse()
    assert m @ inv == Matrix.identity(big, 2)
    with pytest.raises(ValueError):
        Matrix(big, [[1, 1], [1, 1]]).inverse()


def test_block_diag_and_stacks():
    a = Matrix(GF5, [[1]])
    b = Matrix(GF5, [[2, 0], [0, 3]])
    d = block_diag(a, b)
    assert d.shape == (3, 3)
    assert d.data[0, 0] == 1 and d.data[1, 1] == 2
    assert vstack([a, Matrix(GF5, [[4]])]).shape == (2, 1)
    assert hstack([a, Matrix(GF5, [[4]])]).shape == (1, 2)


# -- property tests ---------------------------------------------------------

_primes = st.sampled_from([2, 3, 5, 32003])


@st.composite
def matrices(draw, max_dim=5):
    field = PrimeField(draw(_primes))
    rows = draw(st.integers(0, max_dim))
    cols = draw(st.integers(0, max_dim))
    entries = draw(
        st.lists(
            st.lists(st.integers(0, field.p - 1), min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        )
    )
    return Matrix(field, entries, rows=rows, cols=cols)


@st.composite
def matrix_with_codomain_subspace(draw, max_dim=5):
    m = draw(matrices(max_dim))
    gens = draw(st.integers(0, max_dim))
    rows = draw(
        st.lists(
            st.lists(st.integers(0, m.field.p - 1), min_size=m.rows, max_size=m.rows),
            min_size=gens,
            max_size=gens,
        )
    )
    return m, Subspace.spanned_by(m.field, m.rows, rows)


@st.composite
def two_subspaces(draw, max_dim=6):
    field = PrimeField(draw(_primes))
    ambient = draw(st.integers(0, max_dim))

    def space():
        gens = draw(st.integers(0, max_dim))
        rows = draw(
            st.lists(
                st.lists(st.integers(0, field.p - 1), min_size=ambient, max_size=ambient),
                min_size=gens,
                max_size=gens,
            )
        )
        return Subspace.spanned_by(field, ambient, rows)

    return space(), space()


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_rref_idempotent(m):
    once = rref(m)
    twice = rref(once.reduced)
    assert twice.reduced == once.reduced
    assert twice.rank == once.rank
    assert list(once.pivots) == sorted(once.pivots)


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_rank_nullity(m):
    assert rank(m) + m.kernel().dim == m.cols


@given(two_subspaces())
@settings(max_examples=150, deadline=None)
def test_lattice_dimension_formula(uv):
    u, v = uv
    assert u.dim + v.dim == (u + v).dim + (u & v).dim


@given(matrix_with_codomain_subspace())
@settings(max_examples=150, deadline=None)
def test_transport_consistency(mu):
    m, u = mu
    assert m.image_of(m.preimage_of(u)) == u & m.image()


@given(two_subspaces())
@settings(max_examples=100, deadline=None)
def test_complement_defining_equations(uv):
    u, v = uv
    w = u + v
    comp = u.complement_in(w)
    assert (comp & u).is_zero()
    assert (comp + u) == w


@given(matrices(max_dim=4))
@settings(max_examples=80, deadline=None)
def test_kernel_vectors_annihilate(m):
    ker = m.kernel()
    for row in ker.basis:
        assert not m.apply(row).any()
