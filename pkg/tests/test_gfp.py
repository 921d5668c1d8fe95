import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import naive_rank
from reslie.gfp import (
    FieldSpec,
    RowEchelon,
    SparseMatrix,
    inv,
    kernel_basis,
    matmul_mod,
    rank,
    reduce_mod_image,
    rref,
    scalar_op,
    solve,
)

PRIMES = [5, 7, 11, 13, 10007, 2147483647]


@st.composite
def matrices(draw, max_rows=9, max_cols=9):
    p = draw(st.sampled_from([5, 7, 11, 101]))
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    density = draw(st.sampled_from([0.15, 0.4, 1.0]))
    seed = draw(st.integers(0, 2**31))
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, (r, c)) * (rng.random((r, c)) < density)
    return a.astype(np.int64), p


def test_fieldspec_validation():
    assert FieldSpec(5).p == 5
    for bad in (1, 2, 3, 4, 9, 2**31 + 11):
        with pytest.raises(ValueError):
            FieldSpec(bad)


def test_scalar_ops():
    f = FieldSpec(7)
    assert f.add(5, 4) == 2 and f.sub(2, 5) == 4 and f.mul(3, 5) == 1
    assert f.inv(3) == 5 and f.pow(3, 6) == 1
    assert scalar_op(3, 4, "mul", 5) == 2
    with pytest.raises(ZeroDivisionError, match="non-invertible"):
        inv(0, 7)
    with pytest.raises(ValueError):
        scalar_op(1, 1, "div", 7)


@pytest.mark.parametrize("p", PRIMES)
def test_matmul_mod_exact(p):
    rng = np.random.default_rng(p % 1000)
    a = rng.integers(0, p, (17, 300), dtype=np.int64)
    b = rng.integers(0, p, (300, 5), dtype=np.int64)
    want = np.array([[sum(int(x) * int(y) for x, y in zip(a[i], b[:, j])) % p for j in range(5)] for i in range(17)])
    assert np.array_equal(matmul_mod(a, b, p), want)


def test_sparse_canonical_form():
    m = SparseMatrix(2, 3, 5, [1, 0, 0, 1], [2, 1, 1, 0], [3, 2, 4, 5])
    # duplicates summed, zeros dropped, sorted by (row, col)
    assert m.entries() == [(0, 1, 1), (1, 2, 3)]
    with pytest.raises(ValueError):
        SparseMatrix.from_entries(2, 2, 5, [(0, 0, 1), (0, 0, 2)])
    assert m.T.shape == (3, 2) and m.T.T == m


def test_rank_small_examples():
    assert rank(SparseMatrix.from_dense([[1, 1]], 5)) == 1
    assert rank(SparseMatrix(0, 4, 5, [], [], [])) == 0
    assert rank(SparseMatrix.from_dense(np.eye(6, dtype=np.int64), 7)) == 6
    assert rank(SparseMatrix.from_dense([[1, 2], [2, 4]], 5)) == 1


def test_kernel_canonical_example():
    k = kernel_basis(SparseMatrix.from_dense([[1, 1]], 5))
    assert k.tolist() == [[4, 1]]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_naive(mp):
    a, p = mp
    assert rank(SparseMatrix.from_dense(a, p)) == naive_rank(a.tolist(), p)


@settings(max_examples=60, deadline=None)
@given(matrices(), st.integers(0, 2**31))
def test_rank_permutation_invariant(mp, seed):
    a, p = mp
    rng = np.random.default_rng(seed)
    b = a[rng.permutation(a.shape[0])][:, rng.permutation(a.shape[1])]
    assert rank(SparseMatrix.from_dense(a, p)) == rank(SparseMatrix.from_dense(b, p))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_plus_kernel(mp):
    a, p = mp
    m = SparseMatrix.from_dense(a, p)
    k = kernel_basis(m)
    assert rank(m) + k.shape[0] == a.shape[1]
    assert not (matmul_mod(a, k.T, p)).any()
    if k.shape[0]:
        assert rank(SparseMatrix.from_dense(k, p)) == k.shape[0]


@settings(max_examples=30, deadline=None)
@given(matrices(max_rows=14, max_cols=14))
def test_serial_equals_parallel(mp):
    a, p = mp
    m = SparseMatrix.from_dense(a, p)
    assert rank(m, workers=1) == rank(m, workers=3)
    r1, p1 = rref(m, workers=1)
    r3, p3 = rref(m, workers=3)
    assert r1 == r3 and np.array_equal(p1, p3)
    assert np.array_equal(kernel_basis(m, 1), kernel_basis(m, 3))


@settings(max_examples=40, deadline=None)
@given(matrices(), st.integers(0, 2**31))
def test_rref_canonical_under_row_operations(mp, seed):
    """Row space determines the RREF: mixing rows by an invertible matrix changes nothing."""
    a, p = mp
    rng = np.random.default_rng(seed)
    n = a.shape[0]
    while True:
        g = rng.integers(0, p, (n, n))
        if naive_rank(g.tolist(), p) == n:
            break
    b = matmul_mod(g, a, p) if n else a
    ra, pa = rref(SparseMatrix.from_dense(a, p))
    rb, pb = rref(SparseMatrix.from_dense(b, p))
    assert ra == rb and np.array_equal(pa, pb)


@settings(max_examples=40, deadline=None)
@given(matrices(), st.integers(0, 2**31))
def test_solve(mp, seed):
    a, p = mp
    m = SparseMatrix.from_dense(a, p)
    rng = np.random.default_rng(seed)
    x0 = rng.integers(0, p, a.shape[1])
    b = matmul_mod(a, x0, p) if a.shape[0] else np.zeros(0, np.int64)
    x = solve(m, b)
    assert x is not None and np.array_equal(matmul_mod(a, x, p) if a.shape[0] else b, b)


def test_solve_inconsistent():
    m = SparseMatrix.from_dense([[1, 1], [2, 2]], 5)
    assert solve(m, [1, 0]) is None


def test_reduce_mod_image():
    basis, _ = rref(SparseMatrix.from_dense([[1, 2, 0], [0, 0, 1]], 7))
    v = reduce_mod_image([3, 1, 5], basis)
    assert v[0] == 0 and v[2] == 0
    with pytest.raises(ValueError):
        reduce_mod_image([1, 2], basis)


def test_row_echelon_incremental():
    e = RowEchelon(3, 5)
    assert len(e.add(np.array([[1, 2, 3]]))) == 1
    assert len(e.add(np.array([[2, 4, 1]]))) == 0  # 2 * (1, 2, 3) mod 5
    assert len(e.add(np.array([[0, 1, 1]]))) == 1
    assert len(e.add(np.array([[1, 3, 4]]))) == 0  # sum of the two
    assert e.rank == 2 and e.contains([2, 5, 7]) and not e.contains([0, 0, 1])


def test_large_prime_limbs():
    p = 2147483647
    a = SparseMatrix.from_dense([[p - 1, 2], [3, p - 5]], p)
    det = ((p - 1) * (p - 5) - 6) % p
    assert rank(a) == (2 if det else 1)
