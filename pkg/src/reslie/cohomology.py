"""Chevalley-Eilenberg cohomology with trivial coefficients, degrees 1 and 2.

Cochain pairs (i < j) and triples (i < j < k) are indexed lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .algebra import AlgebraDescription, iterated_bracket, p_power_eval
from .gfp import SparseMatrix, kernel_basis, matmul_mod, rank, rref, solve

__all__ = [
    "DEFAULT_MAX_TRIPLES",
    "CochainError",
    "OneCochain",
    "TwoCochain",
    "CohomologyReport",
    "pair_index",
    "triple_index",
    "delta1_matrix",
    "delta2_matrix",
    "is_cocycle",
    "h2_basis",
    "is_coboundary",
    "delta_map",
    "delta_map_table",
]

DEFAULT_MAX_TRIPLES = 10_000_000


class CochainError(ValueError):
    pass


def pair_index(i, j, d: int):
    """Lexicographic index of the pair (i, j), i < j, among C(d, 2) pairs."""
    i = np.asarray(i, dtype=np.int64)
    j = np.asarray(j, dtype=np.int64)
    return i * d - i * (i + 1) // 2 + (j - i - 1)


def _c2(n):
    return n * (n - 1) // 2


def _c3(n):
    return n * (n - 1) * (n - 2) // 6


def triple_index(a, b, c, d: int):
    """Lexicographic index of (a, b, c), a < b < c, among C(d, 3) triples."""
    a, b, c = (np.asarray(x, dtype=np.int64) for x in (a, b, c))
    return (_c3(d) - _c3(d - a)) + (_c2(d - a - 1) - _c2(d - b)) + (c - b - 1)


def pairs(d: int) -> np.ndarray:
    i, j = np.triu_indices(d, k=1)
    return np.column_stack([i, j])


@dataclass(frozen=True)
class OneCochain:
    """A linear functional psi on g, stored as its values psi(x_i)."""

    values: np.ndarray

    def __call__(self, v) -> int:
        return int(np.dot(self.values, v))


@dataclass(eq=False)
class TwoCochain:
    """Alternating bilinear form on g, stored on pairs (i < j) in lexicographic order."""

    dim: int
    p: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.int64) % self.p
        if v.shape != (_c2(self.dim),):
            raise CochainError(f"expected {_c2(self.dim)} pair values, got shape {v.shape}")
        self.values = v

    @classmethod
    def zero(cls, dim: int, p: int) -> "TwoCochain":
        return cls(dim, p, np.zeros(_c2(dim), dtype=np.int64))

    @classmethod
    def from_pairs(cls, dim: int, p: int, values: Mapping[tuple[int, int], int]) -> "TwoCochain":
        v = np.zeros(_c2(dim), dtype=np.int64)
        for (i, j), c in values.items():
            if i == j:
                if c % p:
                    raise CochainError("alternating form must vanish on (i, i)")
                continue
            if i > j:
                i, j, c = j, i, -c
            v[pair_index(i, j, dim)] += c
        return cls(dim, p, v)

    def items(self) -> list[tuple[int, int, int]]:
        nz = np.flatnonzero(self.values)
        pr = pairs(self.dim)[nz]
        return [(int(i), int(j), int(c)) for (i, j), c in zip(pr, self.values[nz])]

    def matrix(self) -> np.ndarray:
        """Antisymmetric d x d matrix Phi with phi(u, v) = u^T Phi v."""
        d, p = self.dim, self.p
        m = np.zeros((d, d), dtype=np.int64)
        i, j = np.triu_indices(d, k=1)
        m[i, j] = self.values
        m[j, i] = (-self.values) % p
        return m

    def __call__(self, u, v) -> int:
        return int(matmul_mod(np.asarray(u)[None, :], matmul_mod(self.matrix(), np.asarray(v)[:, None], self.p), self.p)[0, 0])

    def is_zero(self) -> bool:
        return not self.values.any()

    def __add__(self, other: "TwoCochain") -> "TwoCochain":
        return TwoCochain(self.dim, self.p, self.values + other.values)

    def __sub__(self, other: "TwoCochain") -> "TwoCochain":
        return TwoCochain(self.dim, self.p, self.values - other.values)

    def __mul__(self, c: int) -> "TwoCochain":
        return TwoCochain(self.dim, self.p, self.values * int(c))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TwoCochain):
            return NotImplemented
        return self.dim == other.dim and self.p == other.p and np.array_equal(self.values, other.values)

    __hash__ = None


@dataclass
class CohomologyReport:
    h1_dim: int
    h2_dim: int
    h2_reps: list[TwoCochain]
    delta1_rank: int
    delta2_kernel_dim: int


def delta1_matrix(alg: AlgebraDescription) -> SparseMatrix:
    """C(d,2) x d matrix of delta^1: row (i, j) holds the coordinates of [x_i, x_j]."""

    def make():
        d = alg.dim
        b = alg.brackets
        return SparseMatrix(_c2(d), d, alg.p, pair_index(b[:, 0], b[:, 1], d), b[:, 2], b[:, 3])

    return alg._cached("delta1", make)


def delta2_matrix(alg: AlgebraDescription, max_triples: int | None = DEFAULT_MAX_TRIPLES) -> SparseMatrix:
    """C(d,3) x C(d,2) matrix of delta^2.

    Row (i < j < k) encodes phi([x_i,x_j],x_k) - phi([x_i,x_k],x_j) + phi([x_j,x_k],x_i).
    """
    d, p = alg.dim, alg.p
    if max_triples is not None and _c3(d) > max_triples:
        from .constructors import ResourceGuardError

        raise ResourceGuardError(f"delta^2 would have {_c3(d)} rows > limit {max_triples}")

    def make():
        b = alg.brackets
        rows, cols, vals = [], [], []
        ks = np.arange(d, dtype=np.int64)
        # each structure constant [x_i, x_j] -> t x_c contributes to every triple {i, j, k}
        chunk = max(1, 4_000_000 // max(d, 1))
        for s in range(0, len(b), chunk):
            i, j, c, t = (x[:, None] for x in b[s : s + chunk].T)
            k = ks[None, :]
            live = (k != i) & (k != j) & (k != c)
            sign = np.where(k < i, 1, np.where(k < j, -1, 1))
            lo = np.minimum(np.minimum(i, j), k)
            hi = np.maximum(np.maximum(i, j), k)
            mid = i + j + k - lo - hi
            row = triple_index(lo, mid, hi, d)
            cmin = np.minimum(c, k)
            cmax = np.maximum(c, k)
            col = pair_index(cmin, np.where(live, cmax, cmin + 1), d)
            val = t * sign * np.where(c < k, 1, -1)
            rows.append(row[live])
            cols.append(col[live])
            vals.append(val[live])
        cat = lambda xs: np.concatenate(xs) if xs else np.zeros(0, np.int64)  # noqa: E731
        return SparseMatrix(_c3(d), _c2(d), p, cat(rows), cat(cols), cat(vals))

    return alg._cached("delta2", make)


def is_cocycle(alg: AlgebraDescription, phi: TwoCochain) -> bool:
    _check_phi(alg, phi)
    return not delta2_matrix(alg).matvec(phi.values).any()


def _check_phi(alg: AlgebraDescription, phi: TwoCochain):
    if phi.dim != alg.dim or phi.p != alg.p:
        raise CochainError(f"cochain for dim {phi.dim}, p={phi.p} does not match algebra (dim {alg.dim}, p={alg.p})")


def h2_basis(alg: AlgebraDescription, max_triples: int | None = DEFAULT_MAX_TRIPLES, workers: int = 1) -> CohomologyReport:
    """dim H^1, dim H^2 and canonical H^2 representatives.

    Representatives span the cocycles that vanish on the pivot positions of
    the echelonized coboundary space, i.e. the kernel vectors of delta^2
    reduced modulo im delta^1; they are returned in canonical kernel form.
    """
    d = alg.dim
    d1 = delta1_matrix(alg)
    d2 = delta2_matrix(alg, max_triples)
    r1 = rank(d1, workers)
    ker2 = _c2(d) - rank(d2, workers)
    _, im_piv = rref(d1.transpose(), workers)
    keep = np.setdiff1d(np.arange(_c2(d)), im_piv)
    reduced = kernel_basis(d2.select_columns(keep), workers)
    reps = []
    for v in reduced:
        full = np.zeros(_c2(d), dtype=np.int64)
        full[keep] = v
        reps.append(TwoCochain(d, alg.p, full))
    h2 = ker2 - r1
    if len(reps) != h2:
        raise ArithmeticError(f"inconsistent H^2 computation: {len(reps)} representatives, dimension {h2}")
    return CohomologyReport(h1_dim=d - r1, h2_dim=h2, h2_reps=reps, delta1_rank=r1, delta2_kernel_dim=ker2)


def is_coboundary(alg: AlgebraDescription, phi: TwoCochain) -> OneCochain | None:
    """A 1-cochain psi with delta^1 psi = phi, or None if phi is not a coboundary."""
    _check_phi(alg, phi)
    if not is_cocycle(alg, phi):
        raise CochainError("phi is not a cocycle")
    x = solve(delta1_matrix(alg), phi.values)
    return None if x is None else OneCochain(x)


def delta_map(alg: AlgebraDescription, phi: TwoCochain, g, h, h_power=None) -> int:
    """phi(g, h^[p]) - phi([g, h, ..., h], h) with p - 1 copies of h (left-nested).

    ``h_power`` may carry a precomputed h^[p] when many cochains share h.
    """
    _check_phi(alg, phi)
    p = alg.p
    g = alg.check_vector(g)
    h = alg.check_vector(h)
    if phi.is_zero():
        return 0
    hp = p_power_eval(alg, h) if h_power is None else alg.check_vector(h_power)
    return (phi(g, hp) - phi(iterated_bracket(alg, g, h, p - 1), h)) % p


def delta_map_table(alg: AlgebraDescription, phi: TwoCochain) -> np.ndarray:
    """d x d array of delta_map(phi, x_a, x_b) over all basis pairs (a, b)."""
    _check_phi(alg, phi)
    d, p = alg.dim, alg.p
    out = np.zeros((d, d), dtype=np.int64)
    if phi.is_zero():
        return out
    Phi = phi.matrix()
    pm = alg.pmap_matrix
    for b in range(d):
        first = matmul_mod(Phi, pm[b], p)  # phi(x_a, x_b^[p]) over a
        # phi(R^(p-1) x_a, x_b) with R w = [w, x_b] = -ad(x_b) w; transpose acts on Phi[:, b]
        rt = (-alg.ad_basis(b).T).tocsr()
        v = Phi[:, b].copy()
        for _ in range(p - 1):
            v = (rt @ v) % p
        out[:, b] = (first - v) % p
    return out
