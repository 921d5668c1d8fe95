"""Restricted Lie algebras given by structure constants and a basis [p]-map."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .gfp import FieldSpec, RowEchelon, SparseMatrix, inv, kernel_basis, matmul_mod, rank, rref

__all__ = [
    "AlgebraDescription",
    "CheckReport",
    "bracket_eval",
    "ad_matrix",
    "iterated_bracket",
    "jacobson_terms",
    "p_power_eval",
    "jacobi_check",
    "restrictedness_check",
    "derived_subalgebra",
    "simplicity_check",
    "subalgebra",
    "quotient_algebra",
]

AD_TABLE_MAX_DIM = 160


@dataclass
class CheckReport:
    """Outcome of a verification gate.

    ``witness`` holds whatever located the failure (indices, residuals,
    sampled elements); ``seed`` is the RNG seed used for sampled checks.
    """

    check: str
    passed: bool
    status: str = ""
    message: str = ""
    witness: dict[str, Any] | None = None
    seed: int | None = None

    def __post_init__(self):
        if not self.status:
            self.status = "pass" if self.passed else "fail"

    def __bool__(self):
        return self.passed


def _coo4(entries, dim: int, p: int) -> np.ndarray:
    a = np.asarray(entries, dtype=np.int64).reshape(-1, 4)
    if a.size == 0:
        return np.zeros((0, 4), dtype=np.int64)
    i, j, k, c = a.T
    if (a[:, :3] < 0).any() or (a[:, :3] >= dim).any():
        raise IndexError("bracket index out of range")
    if (i >= j).any():
        raise ValueError("bracket entries require i < j")
    c = c % p
    a = np.column_stack([i, j, k, c])[c != 0]
    order = np.lexsort((a[:, 2], a[:, 1], a[:, 0]))
    a = a[order]
    key = a[:, :3]
    if len(a) > 1 and (np.diff(key, axis=0) == 0).all(axis=1).any():
        raise ValueError("duplicate bracket entry")
    return a


def _coo3(entries, dim: int, p: int) -> np.ndarray:
    a = np.asarray(entries, dtype=np.int64).reshape(-1, 3)
    if a.size == 0:
        return np.zeros((0, 3), dtype=np.int64)
    if (a[:, :2] < 0).any() or (a[:, :2] >= dim).any():
        raise IndexError("p-map index out of range")
    c = a[:, 2] % p
    a = np.column_stack([a[:, 0], a[:, 1], c])[c != 0]
    a = a[np.lexsort((a[:, 1], a[:, 0]))]
    if len(a) > 1 and (np.diff(a[:, :2], axis=0) == 0).all(axis=1).any():
        raise ValueError("duplicate p-map entry")
    return a


class AlgebraDescription:
    """A restricted Lie algebra over GF(p) on the basis x_0, ..., x_{d-1}.

    ``brackets`` rows are ``(i, j, k, c)`` with ``i < j``: [x_i, x_j] has
    coefficient c on x_k.  ``pmap`` rows are ``(i, k, c)``: x_i^[p] has
    coefficient c on x_k.  Instances are immutable; derived matrices are
    cached on first use.
    """

    def __init__(
        self,
        p: int | FieldSpec,
        dim: int,
        brackets=(),
        pmap=(),
        labels: Sequence[str] | None = None,
        name: str | None = None,
    ):
        self.field = p if isinstance(p, FieldSpec) else FieldSpec(p)
        self.p = self.field.p
        if dim < 0:
            raise ValueError("dimension must be non-negative")
        self.dim = int(dim)
        self.brackets = _coo4(brackets, self.dim, self.p)
        self.pmap_entries = _coo3(pmap, self.dim, self.p)
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != self.dim:
                raise ValueError(f"{len(labels)} labels for dimension {self.dim}")
            if any((not s) or any(ch.isspace() for ch in s) for s in labels):
                raise ValueError("basis labels must be non-empty and contain no whitespace")
        self.labels = labels
        self.name = name
        self.brackets.flags.writeable = False
        self.pmap_entries.flags.writeable = False
        self._cache: dict[str, Any] = {}

    @classmethod
    def from_dicts(cls, p, dim, bracket: Mapping, pmap: Mapping, labels=None, name=None):
        """Build from ``{(i, j): {k: c}}`` and ``{i: {k: c}}`` mappings."""
        b = [(i, j, k, c) for (i, j), vec in bracket.items() for k, c in vec.items()]
        m = [(i, k, c) for i, vec in pmap.items() for k, c in vec.items()]
        return cls(p, dim, b, m, labels, name)

    @classmethod
    def from_structure(cls, p, dim, i, j, k, c, pm_i=(), pm_k=(), pm_c=(), labels=None, name=None):
        """Lenient constructor: sums duplicates, orients pairs, drops zeros."""
        i, j, k, c = (np.asarray(x, dtype=np.int64).ravel() for x in (i, j, k, c))
        swap = i > j
        i, j = np.where(swap, j, i), np.where(swap, i, j)
        c = np.where(swap, -c, c)
        keep = i != j
        i, j, k, c = i[keep], j[keep], k[keep], c[keep] % p
        key = (i * dim + j) * dim + k
        uniq, inv_idx = np.unique(key, return_inverse=True)
        tot = np.zeros(uniq.size, dtype=np.int64)
        np.add.at(tot, inv_idx, c)
        ent = np.column_stack([uniq // (dim * dim), (uniq // dim) % dim, uniq % dim, tot % p])
        pm_i, pm_k, pm_c = (np.asarray(x, dtype=np.int64).ravel() for x in (pm_i, pm_k, pm_c))
        pkey = pm_i * dim + pm_k
        puniq, pinv = np.unique(pkey, return_inverse=True)
        ptot = np.zeros(puniq.size, dtype=np.int64)
        np.add.at(ptot, pinv, pm_c % p)
        pent = np.column_stack([puniq // dim, puniq % dim, ptot % p]) if puniq.size else ()
        return cls(p, dim, ent, pent, labels, name)

    # basic accessors -------------------------------------------------

    @property
    def bracket(self) -> dict[tuple[int, int], dict[int, int]]:
        """Structure constants as ``{(i, j): {k: c}}`` for i < j."""
        out: dict[tuple[int, int], dict[int, int]] = {}
        for i, j, k, c in self.brackets.tolist():
            out.setdefault((i, j), {})[k] = c
        return out

    @property
    def pmap(self) -> dict[int, dict[int, int]]:
        out: dict[int, dict[int, int]] = {}
        for i, k, c in self.pmap_entries.tolist():
            out.setdefault(i, {})[k] = c
        return out

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"x{i}"

    def index(self, label: str) -> int:
        if self.labels is None:
            raise KeyError(label)
        return self.labels.index(label)

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def element(self, coords: Mapping[int | str, int]) -> np.ndarray:
        v = self.zero()
        for key, c in coords.items():
            v[self.index(key) if isinstance(key, str) else key] += c
        return v % self.p

    def check_vector(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64)
        if v.shape != (self.dim,):
            raise ValueError(f"expected an element of length {self.dim}, got shape {v.shape}")
        return v % self.p

    def __eq__(self, other):
        if not isinstance(other, AlgebraDescription):
            return NotImplemented
        return (
            self.p == other.p
            and self.dim == other.dim
            and np.array_equal(self.brackets, other.brackets)
            and np.array_equal(self.pmap_entries, other.pmap_entries)
            and self.labels == other.labels
            and self.name == other.name
        )

    __hash__ = object.__hash__

    def same_structure(self, other: "AlgebraDescription") -> bool:
        """Equality ignoring labels and name."""
        return (
            self.p == other.p
            and self.dim == other.dim
            and np.array_equal(self.brackets, other.brackets)
            and np.array_equal(self.pmap_entries, other.pmap_entries)
        )

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        return f"<AlgebraDescription{nm} dim={self.dim} p={self.p}>"

    # cached derived data ----------------------------------------------

    def _cached(self, key: str, make: Callable[[], Any]):
        if key not in self._cache:
            self._cache[key] = make()
        return self._cache[key]

    @property
    def tensor(self) -> sp.csr_matrix:
        """CSR matrix (d, d*d): entry (i, j*d + k) is the x_k-coefficient of [x_i, x_j]."""

        def make():
            d, p = self.dim, self.p
            i, j, k, c = self.brackets.T if len(self.brackets) else (np.zeros(0, np.int64),) * 4
            rows = np.concatenate([i, j])
            cols = np.concatenate([j * d + k, i * d + k])
            vals = np.concatenate([c, (-c) % p])
            return sp.csr_matrix((vals, (rows, cols)), shape=(d, d * d), dtype=np.int64)

        return self._cached("tensor", make)

    @property
    def pair_tensor(self) -> sp.csr_matrix:
        """CSR matrix (d*d, d): row i*d + j holds [x_i, x_j]."""

        def make():
            t = self.tensor.tocoo()
            d = self.dim
            i, j, k = t.row, t.col // d, t.col % d
            return sp.csr_matrix((t.data, (i * d + j, k)), shape=(d * d, d), dtype=np.int64)

        return self._cached("pair_tensor", make)

    @property
    def pmap_matrix(self) -> np.ndarray:
        """Dense (d, d): row i holds the coordinates of x_i^[p]."""

        def make():
            m = np.zeros((self.dim, self.dim), dtype=np.int64)
            if len(self.pmap_entries):
                m[self.pmap_entries[:, 0], self.pmap_entries[:, 1]] = self.pmap_entries[:, 2]
            m.flags.writeable = False
            return m

        return self._cached("pmap_matrix", make)

    def ad_sparse(self, v) -> sp.csr_matrix:
        """ad(v) as a sparse d x d matrix; column j is [v, x_j]."""
        d, p = self.dim, self.p
        v = np.asarray(v, dtype=np.int64) % p
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return sp.csr_matrix((d, d), dtype=np.int64)
        row = sp.csr_matrix((v[nz], (np.zeros(nz.size, dtype=np.int64), nz)), shape=(1, d))
        flat = (row @ self.tensor).tocoo()
        m = sp.csr_matrix((flat.data % p, (flat.col % d, flat.col // d)), shape=(d, d), dtype=np.int64)
        m.eliminate_zeros()
        return m

    def ad_basis(self, i: int) -> sp.csr_matrix:
        cache = self._cached("ad_basis", dict)
        if i not in cache:
            cache[i] = self.ad_sparse(self.basis_vector(i))
        return cache[i]

    def ad_dense(self, v) -> np.ndarray:
        d, p = self.dim, self.p
        v = np.asarray(v, dtype=np.int64) % p
        tt = self._cached("tensor_T", lambda: self.tensor.T.tocsr())
        flat = (tt @ v) % p
        return np.ascontiguousarray(flat.reshape(d, d).T)

    def ad_table(self) -> np.ndarray | None:
        """Dense ad(x_i) for every i as a (d, d, d) array, or None when d > AD_TABLE_MAX_DIM."""
        if self.dim > AD_TABLE_MAX_DIM:
            return None

        def make():
            d = self.dim
            t = self.tensor.toarray().reshape(d, d, d)  # [i, j, k]
            out = np.ascontiguousarray(t.transpose(0, 2, 1))
            out.flags.writeable = False
            return out

        return self._cached("ad_table", make)

    def ad_scaled_basis(self, j: int, a: int) -> np.ndarray:
        """ad(a x_j) as a dense matrix."""
        tab = self.ad_table()
        if tab is None:
            return self.ad_dense(a * self.basis_vector(j))
        return tab[j] * a % self.p


# operations ------------------------------------------------------------


def bracket_eval(alg: AlgebraDescription, u, v) -> np.ndarray:
    """[u, v] by bilinear extension of the structure constants."""
    u = alg.check_vector(u)
    v = alg.check_vector(v)
    return matmul_mod(alg.ad_dense(u), v, alg.p)


def ad_matrix(alg: AlgebraDescription, v) -> SparseMatrix:
    """ad(v) as a d x d SparseMatrix; column j holds [v, x_j]."""
    m = alg.ad_sparse(alg.check_vector(v))
    return SparseMatrix.from_scipy(m, alg.p)


def iterated_bracket(alg: AlgebraDescription, g, h, k: int) -> np.ndarray:
    """[[..[g, h], h..], h] with k copies of h (left-nested)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    w = alg.check_vector(g)
    h = alg.check_vector(h)
    if k == 0:
        return w
    adh = alg.ad_sparse(h)
    p = alg.p
    for _ in range(k):
        w = (-(adh @ w)) % p
    return w


def _ad_poly(adx: np.ndarray, ady: np.ndarray, start: np.ndarray, steps: int, p: int) -> np.ndarray:
    """Apply ad(t x + y) ``steps`` times to ``start``; rows are t-coefficients 0..p-2."""
    d = start.shape[0]
    poly = np.zeros((p - 1, d), dtype=np.int64)
    poly[0] = start
    both = np.concatenate([ady.T, adx.T], axis=1)
    for _ in range(steps):
        prod = matmul_mod(poly, both, p)
        prod[1:, :d] += prod[:-1, d:]
        poly = prod[:, :d] % p
    return poly


@lru_cache(maxsize=None)
def _inverses(p: int) -> np.ndarray:
    out = np.array([inv(i, p) for i in range(1, p)], dtype=np.int64)
    out.flags.writeable = False
    return out


def _jacobson_from_ad(adx, ady, x, p) -> np.ndarray:
    poly = _ad_poly(adx, ady, x, p - 1, p)
    return poly * _inverses(p)[:, None] % p


def jacobson_terms(alg: AlgebraDescription, x, y) -> np.ndarray:
    """s_1(x, y), ..., s_{p-1}(x, y) as the rows of a (p-1, d) array.

    i * s_i is the coefficient of t^(i-1) in ad(t x + y)^(p-1)(x).
    """
    x = alg.check_vector(x)
    y = alg.check_vector(y)
    return _jacobson_from_ad(alg.ad_dense(x), alg.ad_dense(y), x, alg.p)


def _support_order(v: np.ndarray, order) -> list[int]:
    seq = range(v.shape[0]) if order is None else order
    return [int(j) for j in seq if v[j]]


def p_power_eval(alg: AlgebraDescription, v, order: Sequence[int] | None = None) -> np.ndarray:
    """v^[p], folding over the support of v in ``order`` (default ascending).

    Uses (u + w)^[p] = u^[p] + w^[p] + sum_i s_i(u, w) and
    (a x_j)^[p] = a^p x_j^[p].
    """
    v = alg.check_vector(v)
    p = alg.p
    pm = alg.pmap_matrix
    acc = alg.zero()
    u = alg.zero()
    adu = np.zeros((alg.dim, alg.dim), dtype=np.int64)
    for j in _support_order(v, order):
        a = int(v[j])
        w = np.zeros_like(u)
        w[j] = a
        acc = (acc + pow(a, p, p) * pm[j]) % p
        adw = alg.ad_scaled_basis(j, a)
        if u.any():
            acc = (acc + _jacobson_from_ad(adu, adw, u, p).sum(axis=0)) % p
        u = (u + w) % p
        adu = (adu + adw) % p
    return acc


def _sparse_power(m: sp.csr_matrix, e: int, p: int) -> sp.csr_matrix:
    result = None
    base = m.copy()
    while e:
        if e & 1:
            result = base if result is None else _mod_sparse(result @ base, p)
        e >>= 1
        if e:
            base = _mod_sparse(base @ base, p)
    return result


def _mod_sparse(m, p):
    m = m.tocsr()
    m.data %= p
    m.eliminate_zeros()
    return m


def _matrix_power(a: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.eye(a.shape[0], dtype=np.int64)
    base = a % p
    while e:
        if e & 1:
            result = matmul_mod(result, base, p)
        e >>= 1
        if e:
            base = matmul_mod(base, base, p)
    return result


def jacobi_check(alg: AlgebraDescription) -> CheckReport:
    """Check [x_i, [x_j, x_k]] = [[x_i, x_j], x_k] + [x_j, [x_i, x_k]] on all basis triples."""
    d, p = alg.dim, alg.p
    pairs = alg.pair_tensor
    eye = sp.identity(d, dtype=np.int64, format="csr")
    for i in range(d):
        adt = alg.ad_basis(i).T.tocsr()
        res = pairs @ adt - sp.kron(adt, eye, format="csr") @ pairs - sp.kron(eye, adt, format="csr") @ pairs
        res = _mod_sparse(res, p)
        if res.nnz:
            rows = res.tocoo().row
            triples = sorted({tuple(sorted((i, int(r) // d, int(r) % d))) for r in rows})
            a, b, c = triples[0]
            ea, eb, ec = (alg.basis_vector(t) for t in (a, b, c))
            resid = (
                bracket_eval(alg, bracket_eval(alg, ea, eb), ec)
                + bracket_eval(alg, bracket_eval(alg, eb, ec), ea)
                + bracket_eval(alg, bracket_eval(alg, ec, ea), eb)
            ) % p
            return CheckReport(
                "jacobi",
                False,
                message=f"Jacobi identity fails on basis triple ({a}, {b}, {c})",
                witness={"triple": (a, b, c), "residual": resid.tolist()},
            )
    return CheckReport("jacobi", True, message=f"Jacobi identity holds on all basis triples (d={d})")


def _rng(seed):
    return np.random.default_rng(seed)


def restrictedness_check(alg: AlgebraDescription, samples: int = 50, seed: int = 0) -> CheckReport:
    """Check the [p]-map axioms.

    (a) ad(x_i^[p]) = ad(x_i)^p on every basis vector;
    (b) Jacobson additivity on ``samples`` random pairs;
    (c) ad((a v)^[p]) = ad(a v)^p for ``samples`` random scalars and elements.
    """
    d, p = alg.dim, alg.p
    pm = alg.pmap_matrix
    for i in range(d):
        lhs = alg.ad_sparse(pm[i])
        rhs = _sparse_power(alg.ad_basis(i), p, p)
        diff = _mod_sparse(lhs - rhs, p)
        if diff.nnz:
            return CheckReport(
                "restricted",
                False,
                message=f"axiom (a): ad(x_{i}^[p]) != ad(x_{i})^p",
                witness={"axiom": "a", "index": i},
                seed=seed,
            )
    rng = _rng(seed)
    for s in range(samples):
        u = rng.integers(0, p, d)
        w = rng.integers(0, p, d)
        lhs = p_power_eval(alg, (u + w) % p)
        rhs = (p_power_eval(alg, u) + p_power_eval(alg, w) + jacobson_terms(alg, u, w).sum(axis=0)) % p
        if not np.array_equal(lhs, rhs):
            return CheckReport(
                "restricted",
                False,
                message="axiom (b): Jacobson additivity fails",
                witness={"axiom": "b", "sample": s, "u": u.tolist(), "w": w.tolist()},
                seed=seed,
            )
    for s in range(samples):
        a = int(rng.integers(1, p))
        v = a * rng.integers(0, p, d) % p
        lhs = alg.ad_dense(p_power_eval(alg, v))
        rhs = _matrix_power(alg.ad_dense(v), p, p)
        if not np.array_equal(lhs, rhs):
            return CheckReport(
                "restricted",
                False,
                message="axiom (c): ad((a v)^[p]) != ad(a v)^p",
                witness={"axiom": "c", "sample": s, "v": v.tolist()},
                seed=seed,
            )
    return CheckReport("restricted", True, message=f"[p]-map axioms hold ({samples} samples)", seed=seed)


def _as_rows(vectors, ncols: int, p: int) -> sp.csr_matrix:
    if sp.issparse(vectors):
        m = sp.csr_matrix(vectors, dtype=np.int64)
    else:
        arr = np.asarray(vectors, dtype=np.int64).reshape(-1, ncols) % p
        m = sp.csr_matrix(arr)
    m.data %= p
    m.eliminate_zeros()
    return m


def pair_brackets(alg: AlgebraDescription, rows) -> sp.csr_matrix:
    """All [b_r, b_s] (r < s) for the rows b of ``rows``, stacked in (r, s) order."""
    d, p = alg.dim, alg.p
    b = _as_rows(rows, d, p)
    k = b.shape[0]
    parts = []
    for r in range(k - 1):
        flat = (b[r] @ alg.tensor).tocoo()
        m = sp.csr_matrix((flat.data, (flat.col // d, flat.col % d)), shape=(d, d), dtype=np.int64)
        parts.append(_mod_sparse(b[r + 1 :] @ m, p))
    if not parts:
        return sp.csr_matrix((0, d), dtype=np.int64)
    return sp.vstack(parts, format="csr")


def _echelon(rows, ncols: int, p: int) -> tuple[sp.csr_matrix, np.ndarray]:
    m = _as_rows(rows, ncols, p)
    red, piv = rref(SparseMatrix.from_scipy(m, p))
    return red.tocsr(), piv


class ClosureError(ValueError):
    pass


def derived_subalgebra(alg: AlgebraDescription, subspace) -> np.ndarray:
    """Echelon basis of span{[u, v]} for u, v in ``subspace`` (rows).

    Raises :class:`ClosureError` when the subspace is not closed under the bracket.
    """
    d, p = alg.dim, alg.p
    base, _ = _echelon(subspace, d, p)
    br = pair_brackets(alg, base)
    brm = SparseMatrix.from_scipy(br, p)
    stacked = SparseMatrix.from_scipy(sp.vstack([base, br]), p)
    if rank(stacked) != base.shape[0]:
        raise ClosureError("subspace is not closed under the bracket")
    red, _ = rref(brm)
    return red.to_dense()


def simplicity_check(alg: AlgebraDescription, trials: int = 5, seed: int = 0) -> CheckReport:
    """Probe simplicity: [g, g] = g, trivial center, and ideals generated by sampled elements.

    Each trial closes span{v} under ad(x_i) for all basis x_i.  Trials use
    random nonzero elements and random basis vectors.  A proper nonzero
    ideal is a certificate of non-simplicity; passing all trials is evidence,
    not proof, of simplicity.
    """
    d, p = alg.dim, alg.p
    if d < 2:
        raise ValueError("simplicity check needs dim >= 2")
    if rank(SparseMatrix.from_scipy(alg.pair_tensor, p)) != d:
        return CheckReport("simple", False, status="not simple", message="[g, g] != g", seed=seed)
    center = kernel_basis(SparseMatrix.from_scipy(alg.tensor.T, p))  # v with ad(v) = 0
    if center.shape[0]:
        return CheckReport(
            "simple",
            False,
            status="not simple",
            message=f"nonzero center of dimension {center.shape[0]}",
            witness={"element": center[0].tolist()},
            seed=seed,
        )
    rng = _rng(seed)
    flat = alg.tensor  # (d, d*d): row j, col i*d+k = [x_j, x_i]_k
    for t in range(2 * trials):
        if t % 2 == 0:
            v = np.zeros(d, dtype=np.int64)
            while not v.any():
                v = rng.integers(0, p, d)
        else:
            v = alg.basis_vector(int(rng.integers(0, d)))
        ech = RowEchelon(d, p)
        frontier = ech.add(v[None, :])
        while frontier.shape[0] and not ech.full:
            # [f, x_i] for every frontier row f and basis x_i
            img = (sp.csr_matrix(frontier) @ flat).toarray().reshape(-1, d) % p
            frontier = ech.add(img)
        if not ech.full:
            return CheckReport(
                "simple",
                False,
                status="not simple",
                message=f"trial {t} generated a proper ideal of dimension {ech.rank}",
                witness={"element": v.tolist(), "ideal_dim": ech.rank},
                seed=seed,
            )
    return CheckReport("simple", True, status="simple", message=f"{2 * trials} ideal trials generated g", seed=seed)


def subalgebra(
    alg: AlgebraDescription,
    basis_rows,
    pmap_rows=None,
    labels=None,
    name: str | None = None,
) -> AlgebraDescription:
    """The subalgebra spanned by RREF rows ``basis_rows`` of the ambient algebra.

    Coordinates in the new basis are read off the pivot columns.  Every
    bracket (and every row of ``pmap_rows``, the ambient p-powers of the
    basis) is verified to lie in the span.
    """
    d, p = alg.dim, alg.p
    b = _as_rows(basis_rows, d, p)
    red, piv = _echelon(b, d, p)
    k = red.shape[0]
    if k != b.shape[0] or (red != b).nnz:
        raise ValueError("basis rows must be in reduced row-echelon form")

    def coords(vectors: sp.csr_matrix) -> sp.csr_matrix:
        c = _mod_sparse(vectors[:, piv], p)
        if _mod_sparse(c @ red - vectors, p).nnz:
            raise ClosureError("vector outside the subalgebra")
        return c

    ii, jj, kk, cc = [], [], [], []
    for r in range(k - 1):
        flat = (red[r] @ alg.tensor).tocoo()
        m = sp.csr_matrix((flat.data, (flat.col // d, flat.col % d)), shape=(d, d), dtype=np.int64)
        br = _mod_sparse(red[r + 1 :] @ m, p)
        c = coords(br).tocoo()
        ii.append(np.full(c.nnz, r))
        jj.append(c.row + r + 1)
        kk.append(c.col)
        cc.append(c.data)
    cat = lambda xs: np.concatenate(xs) if xs else np.zeros(0, np.int64)  # noqa: E731
    pm = ((), (), ())
    if pmap_rows is not None:
        pc = coords(_as_rows(pmap_rows, d, p)).tocoo()
        pm = (pc.row, pc.col, pc.data)
    return AlgebraDescription.from_structure(
        p, k, cat(ii), cat(jj), cat(kk), cat(cc), *pm, labels=labels, name=name
    )


def quotient_algebra(alg: AlgebraDescription, ideal_rows, name: str | None = None) -> AlgebraDescription:
    """g / I on the basis vectors that are not pivots of the ideal's echelon basis.

    The ideal must be a p-ideal for the induced [p]-map to be well defined;
    this is checked.
    """
    d, p = alg.dim, alg.p
    red, piv = _echelon(ideal_rows, d, p)
    ideal = red.toarray()
    keep = np.setdiff1d(np.arange(d), piv)
    pos = np.full(d, -1, dtype=np.int64)
    pos[keep] = np.arange(keep.size)

    def reduce(v):
        v = v % p
        if piv.size:
            v = (v - matmul_mod(v[..., piv], ideal, p)) % p
        return v

    # ideal check: [x_i, I] and I^[p] stay in I
    for row in ideal:
        if reduce(alg.ad_dense(row).T).any():
            raise ClosureError("subspace is not an ideal")
        if reduce(p_power_eval(alg, row)).any():
            raise ClosureError("ideal is not closed under the [p]-map")
    ii, jj, kk, cc = [], [], [], []
    for a_idx, a in enumerate(keep):
        ad = alg.ad_dense(alg.basis_vector(a))  # column j = [x_a, x_j]
        cols = keep[keep > a]
        if cols.size == 0:
            continue
        vecs = reduce(ad[:, cols].T)  # rows: [x_a, x_b]
        r, c = np.nonzero(vecs[:, keep])
        ii.append(np.full(r.size, a_idx))
        jj.append(pos[cols[r]])
        kk.append(c)
        cc.append(vecs[:, keep][r, c])
    pmv = reduce(alg.pmap_matrix[keep])[:, keep]
    pr, pcn = np.nonzero(pmv)
    labels = tuple(alg.labels[i] for i in keep) if alg.labels else None
    cat = lambda xs: np.concatenate(xs) if xs else np.zeros(0, np.int64)  # noqa: E731
    return AlgebraDescription.from_structure(
        p, keep.size, cat(ii), cat(jj), cat(kk), cat(cc), pr, pcn, pmv[pr, pcn], labels=labels, name=name
    )
