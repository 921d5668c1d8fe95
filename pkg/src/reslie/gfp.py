"""Exact arithmetic over the prime field GF(p).

Scalars are plain Python/numpy integers kept in ``0..p-1``.  Matrices are
held in :class:`SparseMatrix` (canonical COO) and eliminated block by block:
the bipartite row/column graph of a sparse matrix splits it into
independent diagonal blocks, and each block is reduced with dense numpy
kernels.  Matrices coming from graded algebras decompose into many small
blocks, which is what makes the large coboundary ranks tractable.

Every basis returned here is canonical, so results are byte-stable no
matter how the work is scheduled.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

__all__ = [
    "FieldSpec",
    "SparseMatrix",
    "RowEchelon",
    "scalar_op",
    "inv",
    "matmul_mod",
    "rank",
    "rref",
    "kernel_basis",
    "reduce_mod_image",
    "solve",
    "dense_rank",
    "rref_dense",
]

_FLOAT_EXACT = 2**53


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field GF(p), ``5 <= p <= 2**31 - 1``."""

    p: int

    def __post_init__(self):
        p = self.p
        if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
            raise TypeError(f"p must be an integer, got {p!r}")
        if p < 5:
            raise ValueError(f"characteristic must be at least 5, got {p}")
        if p > 2**31 - 1:
            raise ValueError(f"p = {p} exceeds 2**31 - 1")
        if not _is_prime(int(p)):
            raise ValueError(f"{p} is not prime")
        object.__setattr__(self, "p", int(p))

    def __call__(self, a) -> int:
        return int(a) % self.p

    def add(self, a, b):
        return (int(a) + int(b)) % self.p

    def sub(self, a, b):
        return (int(a) - int(b)) % self.p

    def mul(self, a, b):
        return int(a) * int(b) % self.p

    def inv(self, a):
        return inv(a, self.p)

    def pow(self, a, e):
        return pow(int(a), int(e), self.p)


def inv(a, p: int) -> int:
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError("non-invertible element")
    return pow(a, p - 2, p)


def scalar_op(a, b, kind: str, p: int) -> int:
    """Apply ``kind`` (add, sub, mul, inv, pow) to scalars mod ``p``.

    For ``inv`` the argument ``b`` is ignored; for ``pow`` it is the exponent.
    """
    if kind == "add":
        return (int(a) + int(b)) % p
    if kind == "sub":
        return (int(a) - int(b)) % p
    if kind == "mul":
        return int(a) * int(b) % p
    if kind == "inv":
        return inv(a, p)
    if kind == "pow":
        return pow(int(a), int(b), p)
    raise ValueError(f"unknown scalar operation {kind!r}")


_SMALL_PRODUCT = 1 << 16


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact ``a @ b mod p`` for integer arrays with entries in ``0..p-1``."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    k = a.shape[-1]
    if k == 0 or a.size == 0 or b.size == 0:
        return np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
    if k * (p - 1) ** 2 < _FLOAT_EXACT:
        if a.size * b.size < _SMALL_PRODUCT * k:
            return (a @ b) % p  # tiny operands: integer matmul is exact and avoids conversions
        out = a.astype(np.float64) @ b.astype(np.float64)
        return out.astype(np.int64) % p
    # split b into 16-bit limbs and chunk the inner dimension so int64 sums stay exact
    lo = b & 0xFFFF
    hi = b >> 16
    step = max(1, (2**62) // ((p - 1) * 0xFFFF))
    out = np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
    for s in range(0, k, step):
        aa = a[..., s : s + step]
        out = (out + (aa @ lo[s : s + step]) % p + ((aa @ hi[s : s + step]) % p) * 65536) % p
    return out


class SparseMatrix:
    """Immutable sparse matrix over GF(p) in canonical COO form.

    Entries are sorted by (row, col), unique, nonzero and reduced to 0..p-1.
    """

    __slots__ = ("rows", "cols", "p", "row", "col", "val", "_csr")

    def __init__(self, rows: int, cols: int, p: int, row, col, val, *, sum_duplicates: bool = True):
        row = np.asarray(row, dtype=np.int64).ravel()
        col = np.asarray(col, dtype=np.int64).ravel()
        val = np.asarray(val, dtype=np.int64).ravel() % p
        if not (row.shape == col.shape == val.shape):
            raise ValueError("row, col and val must have equal length")
        if row.size:
            if row.min() < 0 or row.max() >= rows or col.min() < 0 or col.max() >= cols:
                raise IndexError("entry index out of range")
        key = row * cols + col
        order = np.argsort(key, kind="stable")
        key, val = key[order], val[order]
        if key.size:
            uniq, start = np.unique(key, return_index=True)
            if uniq.size != key.size:
                if not sum_duplicates:
                    raise ValueError("duplicate (row, col) entry")
                val = np.add.reduceat(val, start) % p
                key = uniq
        keep = val != 0
        key, val = key[keep], val[keep]
        self.rows, self.cols, self.p = int(rows), int(cols), int(p)
        self.row = key // cols if cols else key
        self.col = key % cols if cols else key
        self.val = val
        self._csr = None
        for arr in (self.row, self.col, self.val):
            arr.flags.writeable = False

    @classmethod
    def from_entries(cls, rows: int, cols: int, p: int, entries: Iterable[tuple[int, int, int]]):
        entries = list(entries)
        if entries:
            r, c, v = zip(*entries)
        else:
            r = c = v = ()
        return cls(rows, cols, p, r, c, v, sum_duplicates=False)

    @classmethod
    def from_dense(cls, a, p: int):
        a = np.asarray(a, dtype=np.int64) % p
        if a.ndim != 2:
            raise ValueError("expected a 2-D array")
        r, c = np.nonzero(a)
        return cls(a.shape[0], a.shape[1], p, r, c, a[r, c])

    @classmethod
    def from_scipy(cls, m, p: int):
        m = sp.coo_matrix(m)
        return cls(m.shape[0], m.shape[1], p, m.row, m.col, m.data)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return int(self.val.size)

    def entries(self) -> list[tuple[int, int, int]]:
        return list(zip(self.row.tolist(), self.col.tolist(), self.val.tolist()))

    def tocsr(self) -> sp.csr_matrix:
        if self._csr is None:
            self._csr = sp.csr_matrix((self.val, (self.row, self.col)), shape=self.shape, dtype=np.int64)
        return self._csr

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.int64)
        out[self.row, self.col] = self.val
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, self.p, self.col, self.row, self.val)

    T = property(transpose)

    def matvec(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.p
        if v.shape[0] != self.cols:
            raise ValueError(f"vector length {v.shape[0]} != {self.cols} columns")
        out = np.zeros(self.rows, dtype=np.int64)
        np.add.at(out, self.row, self.val * v[self.col] % self.p)
        return out % self.p

    def select_columns(self, keep) -> "SparseMatrix":
        """Submatrix on the columns listed in ``keep`` (renumbered in order)."""
        keep = np.asarray(keep, dtype=np.int64)
        pos = np.full(self.cols, -1, dtype=np.int64)
        pos[keep] = np.arange(keep.size)
        mask = pos[self.col] >= 0
        return SparseMatrix(self.rows, keep.size, self.p, self.row[mask], pos[self.col[mask]], self.val[mask])

    def vstack(self, other: "SparseMatrix") -> "SparseMatrix":
        if other.cols != self.cols or other.p != self.p:
            raise ValueError("incompatible matrices")
        return SparseMatrix(
            self.rows + other.rows,
            self.cols,
            self.p,
            np.concatenate([self.row, other.row + self.rows]),
            np.concatenate([self.col, other.col]),
            np.concatenate([self.val, other.val]),
        )

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and self.p == other.p
            and np.array_equal(self.row, other.row)
            and np.array_equal(self.col, other.col)
            and np.array_equal(self.val, other.val)
        )

    __hash__ = None

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols} over GF({self.p}), nnz={self.nnz})"


def _rref_dense(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Gauss-Jordan on a small dense block.  Returns (nonzero rows, pivot cols)."""
    a = np.array(a, dtype=np.int64) % p
    nrows, ncols = a.shape
    r = 0
    piv: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = a[r] * inv(a[r, c], p) % p
        colv = a[:, c].copy()
        colv[r] = 0
        hit = np.flatnonzero(colv)
        if hit.size:
            a[hit] = (a[hit] - np.outer(colv[hit], a[r])) % p
        piv.append(c)
        r += 1
    return a[:r], piv


class RowEchelon:
    """Incrementally maintained reduced row-echelon basis of a row space.

    Rows are added in batches; the stored basis is always in RREF with
    leading ones, so it is determined by the span alone.
    """

    def __init__(self, ncols: int, p: int):
        self.ncols = int(ncols)
        self.p = int(p)
        self.basis = np.zeros((0, self.ncols), dtype=np.int64)
        self.pivots = np.zeros(0, dtype=np.int64)

    @property
    def rank(self) -> int:
        return int(self.pivots.size)

    @property
    def full(self) -> bool:
        return self.rank == self.ncols

    def reduce(self, rows: np.ndarray) -> np.ndarray:
        rows = np.atleast_2d(np.asarray(rows, dtype=np.int64)) % self.p
        if self.rank and rows.size:
            rows = (rows - matmul_mod(rows[:, self.pivots], self.basis, self.p)) % self.p
        return rows

    def add(self, rows: np.ndarray) -> np.ndarray:
        """Add rows to the span; return the newly created basis rows."""
        p = self.p
        rows = self.reduce(rows)
        rows = rows[rows.any(axis=1)] if rows.size else rows
        if rows.shape[0] == 0:
            return np.zeros((0, self.ncols), dtype=np.int64)
        new, newpiv = _rref_dense(rows, p)
        if not newpiv:
            return new
        newpiv = np.asarray(newpiv, dtype=np.int64)
        if self.rank:
            self.basis = (self.basis - matmul_mod(self.basis[:, newpiv], new, p)) % p
        basis = np.vstack([self.basis, new])
        pivots = np.concatenate([self.pivots, newpiv])
        order = np.argsort(pivots, kind="stable")
        self.basis, self.pivots = basis[order], pivots[order]
        return new

    def contains(self, v) -> bool:
        return not self.reduce(v).any()


@dataclass
class _Block:
    rows: np.ndarray  # global row indices
    cols: np.ndarray  # global col indices, ascending


def _blocks(m: SparseMatrix) -> list[_Block]:
    """Connected components of the bipartite row/column graph (rows with entries only)."""
    if m.nnz == 0:
        return []
    n = m.rows + m.cols
    g = sp.coo_matrix(
        (np.ones(m.nnz, dtype=np.int8), (m.row, m.col + m.rows)), shape=(n, n)
    ).tocsr()
    _, labels = connected_components(g, directed=False)
    row_lab = labels[: m.rows]
    col_lab = labels[m.rows :]
    active_rows = np.unique(m.row)
    active_cols = np.unique(m.col)
    # order blocks by their smallest column so the decomposition is canonical
    col_order = np.argsort(col_lab[active_cols], kind="stable")
    cl = col_lab[active_cols][col_order]
    cc = active_cols[col_order]
    starts = np.flatnonzero(np.r_[True, cl[1:] != cl[:-1]])
    ends = np.r_[starts[1:], cl.size]
    rl = row_lab[active_rows]
    r_order = np.argsort(rl, kind="stable")
    rl_sorted = rl[r_order]
    rr = active_rows[r_order]
    out = []
    for s, e in zip(starts, ends):
        lab = cl[s]
        lo, hi = np.searchsorted(rl_sorted, [lab, lab + 1])
        out.append(_Block(rows=np.sort(rr[lo:hi]), cols=np.sort(cc[s:e])))
    out.sort(key=lambda b: int(b.cols[0]))
    return out


def _eliminate_block(csr: sp.csr_matrix, block: _Block, p: int, chunk: int | None = None) -> RowEchelon:
    ncols = block.cols.size
    pos = {int(c): i for i, c in enumerate(block.cols)} if ncols < 64 else None
    lookup = None
    if pos is None:
        lookup = np.full(csr.shape[1], -1, dtype=np.int64)
        lookup[block.cols] = np.arange(ncols)
    ech = RowEchelon(ncols, p)
    step = chunk or max(256, 2 * ncols)
    for s in range(0, block.rows.size, step):
        sub = csr[block.rows[s : s + step]]
        sub = sub.tocoo()
        dense = np.zeros((sub.shape[0], ncols), dtype=np.int64)
        if lookup is not None:
            local = lookup[sub.col]
        else:
            local = np.fromiter((pos[int(c)] for c in sub.col), dtype=np.int64, count=sub.col.size)
        dense[sub.row, local] = sub.data
        ech.add(dense)
        if ech.full:
            break
    return ech


def _run_blocks(m: SparseMatrix, workers: int = 1) -> list[tuple[_Block, RowEchelon]]:
    blocks = _blocks(m)
    csr = m.tocsr()
    if workers and workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            echs = list(ex.map(lambda b: _eliminate_block(csr, b, m.p), blocks))
    else:
        echs = [_eliminate_block(csr, b, m.p) for b in blocks]
    return list(zip(blocks, echs))


def rank(m: SparseMatrix, workers: int = 1) -> int:
    """Exact rank over GF(p)."""
    return sum(e.rank for _, e in _run_blocks(m, workers))


def rref(m: SparseMatrix, workers: int = 1) -> tuple[SparseMatrix, np.ndarray]:
    """Reduced row-echelon form of the row space: (rank x cols matrix, pivot columns)."""
    rr, cc, vv, piv = [], [], [], []
    for block, ech in _run_blocks(m, workers):
        if not ech.rank:
            continue
        r, c = np.nonzero(ech.basis)
        rr.append(block.cols[ech.pivots[r]])  # global pivot of each entry's row
        cc.append(block.cols[c])
        vv.append(ech.basis[r, c])
        piv.append(block.cols[ech.pivots])
    if not piv:
        return SparseMatrix(0, m.cols, m.p, [], [], []), np.zeros(0, dtype=np.int64)
    pivots = np.concatenate(piv)
    order = np.argsort(pivots)
    pivots = pivots[order]
    rowpos = np.empty(m.cols, dtype=np.int64)
    rowpos[pivots] = np.arange(pivots.size)
    rows = rowpos[np.concatenate(rr)]
    return SparseMatrix(pivots.size, m.cols, m.p, rows, np.concatenate(cc), np.concatenate(vv)), pivots


def kernel_basis(m: SparseMatrix, workers: int = 1) -> np.ndarray:
    """Canonical basis of the right null space, one vector per row.

    There is one vector per free (non-pivot) column f, ordered by f; it has
    a 1 in column f, 0 in every other free column, and pivot entries solved
    from the RREF.  The set depends only on the null space itself.
    """
    p = m.p
    free_all = np.ones(m.cols, dtype=bool)
    vecs = {}
    for block, ech in _run_blocks(m, workers):
        free_all[block.cols] = False
        piv_local = ech.pivots
        is_piv = np.zeros(block.cols.size, dtype=bool)
        is_piv[piv_local] = True
        for f in np.flatnonzero(~is_piv):
            v = np.zeros(m.cols, dtype=np.int64)
            v[block.cols[f]] = 1
            if ech.rank:
                v[block.cols[piv_local]] = (-ech.basis[:, f]) % p
            vecs[int(block.cols[f])] = v
    for f in np.flatnonzero(free_all):
        v = np.zeros(m.cols, dtype=np.int64)
        v[f] = 1
        vecs[int(f)] = v
    if not vecs:
        return np.zeros((0, m.cols), dtype=np.int64)
    return np.vstack([vecs[k] for k in sorted(vecs)])


def reduce_mod_image(v, image_basis) -> np.ndarray:
    """Strip from ``v`` its component along an echelon basis (rows of ``image_basis``).

    Rows are used in order, each eliminating ``v`` at its leading position,
    so the result vanishes on every pivot position of the basis.
    """
    if isinstance(image_basis, SparseMatrix):
        p = image_basis.p
        basis = image_basis.to_dense()
    else:
        basis, p = image_basis
        basis = np.atleast_2d(np.asarray(basis, dtype=np.int64))
    v = np.asarray(v, dtype=np.int64) % p
    if basis.size and basis.shape[1] != v.shape[0]:
        raise ValueError(f"dimension mismatch: vector of length {v.shape[0]}, basis of width {basis.shape[1]}")
    for row in basis:
        nz = np.flatnonzero(row)
        if nz.size == 0:
            continue
        lead = nz[0]
        if v[lead]:
            v = (v - v[lead] * inv(row[lead], p) * row) % p
    return v


def solve(m: SparseMatrix, b) -> np.ndarray | None:
    """One solution x of ``m x = b``, or None when the system is inconsistent.

    Free variables are set to zero, so the returned solution is canonical.
    """
    b = np.asarray(b, dtype=np.int64) % m.p
    if b.shape[0] != m.rows:
        raise ValueError("right-hand side length does not match row count")
    nzb = np.flatnonzero(b)
    aug = SparseMatrix(
        m.rows,
        m.cols + 1,
        m.p,
        np.concatenate([m.row, nzb]),
        np.concatenate([m.col, np.full(nzb.size, m.cols)]),
        np.concatenate([m.val, b[nzb]]),
    )
    red, piv = rref(aug)
    if piv.size and piv[-1] == m.cols:
        return None
    x = np.zeros(m.cols, dtype=np.int64)
    last = red.col == m.cols
    x[piv[red.row[last]]] = red.val[last]
    return x


def dense_rank(a, p: int) -> int:
    """Rank of a small dense matrix."""
    return len(_rref_dense(np.asarray(a, dtype=np.int64), p)[1])


def rref_dense(a, p: int) -> tuple[np.ndarray, np.ndarray]:
    rows, piv = _rref_dense(np.asarray(a, dtype=np.int64), p)
    return rows, np.asarray(piv, dtype=np.int64)
