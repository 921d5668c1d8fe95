"""Restricted simple Lie algebras: W(n), S(n), H(n), K(n), sl(m), psl(m).

Cartan-type algebras live inside W(n) = Der O(n), O(n) = F[x_1..x_n]/(x_i^p).
Monomials x^a are ordered lexicographically by exponent tuple; the W(n)
basis x^a d_i is ordered by (direction i, monomial).  S, H and K are cut
out algorithmically (divergence kernel, Hamiltonian / contact images,
derived subalgebras) and their [p]-maps come from p-fold composition of
the derivations acting on O(n).
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .algebra import AlgebraDescription, derived_subalgebra, quotient_algebra, subalgebra
from .gfp import FieldSpec, SparseMatrix, kernel_basis, rref

__all__ = [
    "DEFAULT_MAX_DIM",
    "ResourceGuardError",
    "ConstructionError",
    "monomials",
    "construct_witt",
    "construct_sl",
    "construct_psl",
    "construct_special",
    "construct_hamiltonian",
    "construct_contact",
    "construct",
    "expected_dim",
    "derivation_operator",
    "derivation_power",
]

DEFAULT_MAX_DIM = 2000


class ResourceGuardError(RuntimeError):
    pass


class ConstructionError(RuntimeError):
    pass


def _guard(dim: int, max_dim: int | None, what: str):
    if max_dim is not None and dim > max_dim:
        raise ResourceGuardError(f"{what} has dimension {dim} > limit {max_dim}")


@lru_cache(maxsize=None)
def monomials(n: int, p: int) -> np.ndarray:
    """Exponent tuples of O(n) in lexicographic order, shape (p**n, n)."""
    out = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64).reshape(-1, n)
    out.flags.writeable = False
    return out


def _mono_index(expo: np.ndarray, p: int) -> np.ndarray:
    n = expo.shape[-1]
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return expo @ weights


def _mono_label(a) -> str:
    parts = []
    for i, e in enumerate(a, start=1):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


def _witt_labels(n: int, p: int) -> list[str]:
    if n == 1:
        return [f"e_{a - 1}" for a in range(p)]
    labs = []
    for i in range(1, n + 1):
        for a in monomials(n, p):
            m = _mono_label(a)
            labs.append(f"{m}*d{i}" if m else f"d{i}")
    return labs


def derivation_operator(n: int, p: int, coords) -> sp.csr_matrix:
    """Matrix of the derivation sum c * x^a d_i acting on O(n) (columns: monomials)."""
    coords = np.asarray(coords, dtype=np.int64) % p
    mons = monomials(n, p)
    N = mons.shape[0]
    rows, cols, vals = [], [], []
    for idx in np.flatnonzero(coords):
        i, a = divmod(int(idx), N)
        a = mons[a]
        b = mons  # act on every monomial x^b
        e = b + a
        e[:, i] -= 1
        ok = (b[:, i] > 0) & (e < p).all(axis=1)
        src = np.flatnonzero(ok)
        rows.append(_mono_index(e[ok], p))
        cols.append(src)
        vals.append(coords[idx] * b[ok, i] % p)
    if not rows:
        return sp.csr_matrix((N, N), dtype=np.int64)
    m = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(N, N), dtype=np.int64
    )
    m.data %= p
    m.eliminate_zeros()
    return m


def derivation_power(n: int, p: int, coords) -> np.ndarray:
    """W(n)-coordinates of D^p, computed by composing D with itself p times on O(n).

    D^p is again a derivation, so it is fixed by its values on x_1..x_n.
    """
    op = derivation_operator(n, p, coords)
    N = p**n
    out = np.zeros(n * N, dtype=np.int64)
    for j in range(n):
        e = np.zeros(n, dtype=np.int64)
        e[j] = 1
        v = np.zeros(N, dtype=np.int64)
        v[_mono_index(e, p)] = 1
        for _ in range(p):
            v = (op @ v) % p
        out[j * N : (j + 1) * N] = v
    return out


def _witt_structure(n: int, p: int):
    """Structure constants of W(n): [x^a d_i, x^b d_j] = b_i x^(a+b-e_i) d_j - a_j x^(a+b-e_j) d_i."""
    mons = monomials(n, p)
    N = mons.shape[0]
    D = n * N
    dirs = np.repeat(np.arange(n), N)
    exps = np.tile(mons, (n, 1))
    I, J, K, C = [], [], [], []
    for u in range(D - 1):
        i, a = dirs[u], exps[u]
        v = np.arange(u + 1, D)
        j, b = dirs[v], exps[v]
        # term 1: b_i x^(a+b-e_i) d_j
        e1 = a + b
        e1[:, i] -= 1
        c1 = b[:, i]
        ok1 = (c1 > 0) & (e1 < p).all(axis=1)
        tgt1 = j[ok1] * N + _mono_index(e1[ok1], p)
        # term 2: -a_j x^(a+b-e_j) d_i
        e2 = a + b
        e2[np.arange(v.size), j] -= 1
        c2 = a[j]
        ok2 = (c2 > 0) & (e2 < p).all(axis=1)
        tgt2 = i * N + _mono_index(e2[ok2], p)
        I.append(np.full(ok1.sum() + ok2.sum(), u))
        J.append(np.concatenate([v[ok1], v[ok2]]))
        K.append(np.concatenate([tgt1, tgt2]))
        C.append(np.concatenate([c1[ok1], -c2[ok2]]))
    cat = lambda xs: np.concatenate(xs) if xs else np.zeros(0, np.int64)  # noqa: E731
    return cat(I), cat(J), cat(K), cat(C)


def construct_witt(n: int, p: int, max_dim: int | None = DEFAULT_MAX_DIM, labels: bool = True) -> AlgebraDescription:
    """The Witt-Jacobson algebra W(n) = W(n, 1), dimension n p^n.

    For n = 1 the basis is e_j = x^(j+1) d, j = -1..p-2, so that
    [e_j, e_k] = (k - j) e_{j+k}.
    """
    FieldSpec(p)
    if n < 1:
        raise ValueError("n must be at least 1")
    D = n * p**n
    _guard(D, max_dim, f"W({n})")
    I, J, K, C = _witt_structure(n, p)
    pm_i, pm_k, pm_c = [], [], []
    for u in range(D):
        e = np.zeros(D, dtype=np.int64)
        e[u] = 1
        power = derivation_power(n, p, e)
        nz = np.flatnonzero(power)
        pm_i.extend([u] * nz.size)
        pm_k.extend(nz.tolist())
        pm_c.extend(power[nz].tolist())
    return AlgebraDescription.from_structure(
        p, D, I, J, K, C, pm_i, pm_k, pm_c, labels=_witt_labels(n, p) if labels else None, name=f"W({n})"
    )


def _cartan_subalgebra(W: AlgebraDescription, n: int, rows: np.ndarray, name: str) -> AlgebraDescription:
    """Restrict W(n) to an RREF subspace, with [p]-map from operator composition."""
    p = W.p
    rows = np.asarray(rows, dtype=np.int64)
    powers = np.vstack([derivation_power(n, p, r) for r in rows])
    piv = [int(np.flatnonzero(r)[0]) for r in rows]
    labels = [W.labels[c] for c in piv] if W.labels else None
    try:
        return subalgebra(W, rows, powers, labels=labels, name=name)
    except ValueError as exc:
        raise ConstructionError(f"{name}: {exc}") from exc


def _derive_until_stable(W: AlgebraDescription, rows: np.ndarray) -> np.ndarray:
    try:
        while True:
            nxt = derived_subalgebra(W, rows)
            if nxt.shape[0] == rows.shape[0]:
                return nxt
            rows = nxt
    except ValueError as exc:
        raise ConstructionError(str(exc)) from exc


def _rref_rows(vectors: np.ndarray, p: int) -> np.ndarray:
    red, _ = rref(SparseMatrix.from_dense(vectors, p))
    return red.to_dense()


def _check_dim(name: str, got: int, want: int):
    if got != want:
        raise ConstructionError(f"{name} has dimension {got}, expected {want}")


def construct_special(n: int, p: int, max_dim: int | None = DEFAULT_MAX_DIM) -> AlgebraDescription:
    """S(n): derived algebra of the divergence-free part of W(n); dim (n-1)(p^n - 1)."""
    FieldSpec(p)
    if n < 3:
        raise ValueError("S(n) requires n >= 3")
    want = (n - 1) * (p**n - 1)
    _guard(want, max_dim, f"S({n})")
    W = construct_witt(n, p, max_dim=None)
    N = p**n
    mons = monomials(n, p)
    # div(x^a d_i) = a_i x^(a - e_i)
    rows, cols, vals = [], [], []
    for i in range(n):
        a = mons
        ok = a[:, i] > 0
        e = a[ok].copy()
        e[:, i] -= 1
        rows.append(_mono_index(e, p))
        cols.append(i * N + np.flatnonzero(ok))
        vals.append(a[ok, i])
    div = SparseMatrix(N, n * N, p, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals))
    free = kernel_basis(div)
    _check_dim("divergence-free part", free.shape[0], (n - 1) * N + 1)
    rows = _derive_until_stable(W, _rref_rows(free, p))
    _check_dim(f"S({n})", rows.shape[0], want)
    return _cartan_subalgebra(W, n, rows, f"S({n})")


def _poly_derivative(n: int, p: int, i: int):
    """(target monomial index, coefficient) of d_i x^a for every monomial a (ok mask)."""
    mons = monomials(n, p)
    ok = mons[:, i] > 0
    e = mons.copy()
    e[:, i] -= 1
    idx = np.where(ok, _mono_index(np.clip(e, 0, None), p), 0)
    return ok, idx, mons[:, i] % p


def construct_hamiltonian(n: int, p: int, max_dim: int | None = DEFAULT_MAX_DIM) -> AlgebraDescription:
    """H(n), n even: derived algebras of the image of f -> sum_i (d_i f) d_{i+m} - (d_{i+m} f) d_i."""
    FieldSpec(p)
    if n < 2 or n % 2:
        raise ValueError("H(n) requires even n >= 2")
    want = p**n - 2
    _guard(want, max_dim, f"H({n})")
    W = construct_witt(n, p, max_dim=None)
    m = n // 2
    N = p**n
    img = np.zeros((N, n * N), dtype=np.int64)
    f = np.arange(N)
    for i in range(m):
        ok, idx, c = _poly_derivative(n, p, i)
        img[f[ok], (i + m) * N + idx[ok]] += c[ok]
        ok, idx, c = _poly_derivative(n, p, i + m)
        img[f[ok], i * N + idx[ok]] -= c[ok]
    rows = _rref_rows(img % p, p)
    _check_dim("Hamiltonian image", rows.shape[0], N - 1)
    rows = _derive_until_stable(W, rows)
    _check_dim(f"H({n})", rows.shape[0], want)
    return _cartan_subalgebra(W, n, rows, f"H({n})")


def construct_contact(n: int, p: int, max_dim: int | None = DEFAULT_MAX_DIM) -> AlgebraDescription:
    """K(n), n = 2m + 1 odd, via contact vector fields D_K(f), t = x_n:

    D_K(f) = sum_{i<=m} (x_i d_t f - d_{i+m} f) d_i + (d_i f + x_{i+m} d_t f) d_{i+m}
             + (2 f - sum_{j<=2m} x_j d_j f) d_t

    Dimension p^n, or p^n - 1 when n + 3 = 0 mod p.
    """
    FieldSpec(p)
    if n < 3 or n % 2 == 0:
        raise ValueError("K(n) requires odd n >= 3")
    want = p**n - (1 if (n + 3) % p == 0 else 0)
    _guard(want, max_dim, f"K({n})")
    W = construct_witt(n, p, max_dim=None)
    m = (n - 1) // 2
    N = p**n
    t = n - 1
    mons = monomials(n, p)
    f = np.arange(N)
    img = np.zeros((N, n * N), dtype=np.int64)
    ok_t, idx_t, c_t = _poly_derivative(n, p, t)

    def times_x(j, ok, idx, c):
        # x_j * (monomial idx with coefficient c)
        e = mons[idx].copy()
        e[:, j] += 1
        good = ok & (e[:, j] < p)
        return good, np.where(good, _mono_index(np.clip(e, 0, p - 1), p), 0), c

    for i in range(m):
        # coefficient of d_i: x_i d_t f - d_{i+m} f
        g, idx, c = times_x(i, ok_t, idx_t, c_t)
        img[f[g], i * N + idx[g]] += c[g]
        ok, idx, c = _poly_derivative(n, p, i + m)
        img[f[ok], i * N + idx[ok]] -= c[ok]
        # coefficient of d_{i+m}: d_i f + x_{i+m} d_t f
        ok, idx, c = _poly_derivative(n, p, i)
        img[f[ok], (i + m) * N + idx[ok]] += c[ok]
        g, idx, c = times_x(i + m, ok_t, idx_t, c_t)
        img[f[g], (i + m) * N + idx[g]] += c[g]
    # coefficient of d_t: (2 - sum_{j<2m} a_j) x^a
    img[f, t * N + f] += 2 - mons[:, : 2 * m].sum(axis=1)
    rows = _rref_rows(img % p, p)
    _check_dim("contact image", rows.shape[0], N)
    rows = _derive_until_stable(W, rows)
    _check_dim(f"K({n})", rows.shape[0], want)
    return _cartan_subalgebra(W, n, rows, f"K({n})")


def _sl_basis(m: int):
    off = [(i, j) for i in range(m) for j in range(m) if i != j]
    labels = [f"E{i + 1}{j + 1}" if m < 10 else f"E{i + 1}_{j + 1}" for i, j in off] + [f"h{k + 1}" for k in range(m - 1)]
    mats = []
    for i, j in off:
        a = np.zeros((m, m), dtype=np.int64)
        a[i, j] = 1
        mats.append(a)
    for k in range(m - 1):
        a = np.zeros((m, m), dtype=np.int64)
        a[k, k] = 1
        a[k + 1, k + 1] = -1
        mats.append(a)
    return off, labels, mats


def _sl_coords(a: np.ndarray, off, p: int) -> np.ndarray:
    m = a.shape[0]
    a = a % p
    diag = np.diag(a)
    if int(diag.sum()) % p:
        raise ConstructionError("matrix is not traceless")
    offc = [a[i, j] for i, j in off]
    hc = np.cumsum(diag)[: m - 1] % p
    return np.concatenate([np.asarray(offc, dtype=np.int64), hc])


def _matpow(a, e, p):
    out = np.eye(a.shape[0], dtype=np.int64)
    for _ in range(e):
        out = out @ a % p
    return out


def construct_sl(m: int, p: int, max_dim: int | None = DEFAULT_MAX_DIM, check_divisibility: bool = True) -> AlgebraDescription:
    """sl(m): traceless matrices, basis E_ij (i != j, lexicographic) then h_k = E_kk - E_k+1,k+1.

    The [p]-map is the matrix p-th power (its tracelessness is checked).
    """
    FieldSpec(p)
    if m < 2:
        raise ValueError("sl(m) requires m >= 2")
    if check_divisibility and m % p == 0:
        raise ValueError(f"sl({m}) is not simple when p | m; use construct_psl")
    d = m * m - 1
    _guard(d, max_dim, f"sl({m})")
    off, labels, mats = _sl_basis(m)
    I, J, K, C = [], [], [], []
    for u in range(d):
        for v in range(u + 1, d):
            co = _sl_coords(mats[u] @ mats[v] - mats[v] @ mats[u], off, p)
            for k in np.flatnonzero(co):
                I.append(u)
                J.append(v)
                K.append(k)
                C.append(co[k])
    pi, pk, pc = [], [], []
    for u in range(d):
        co = _sl_coords(_matpow(mats[u] % p, p, p), off, p)
        for k in np.flatnonzero(co):
            pi.append(u)
            pk.append(k)
            pc.append(co[k])
    return AlgebraDescription.from_structure(p, d, I, J, K, C, pi, pk, pc, labels=labels, name=f"sl({m})")


def construct_psl(m: int, p: int, max_dim: int | None = DEFAULT_MAX_DIM) -> AlgebraDescription:
    """psl(m) = sl(m) / (scalars) for p | m; dimension m^2 - 2."""
    FieldSpec(p)
    if m % p:
        raise ValueError(f"psl({m}) requires p | m")
    _guard(m * m - 2, max_dim, f"psl({m})")
    sl = construct_sl(m, p, max_dim=None, check_divisibility=False)
    off, _, _ = _sl_basis(m)
    center = _sl_coords(np.eye(m, dtype=np.int64), off, p)
    return quotient_algebra(sl, center[None, :], name=f"psl({m})")


FAMILIES = ("witt", "special", "hamiltonian", "contact", "sl", "psl")


def construct(family: str, n: int, p: int, max_dim: int | None = DEFAULT_MAX_DIM) -> AlgebraDescription:
    makers = {
        "witt": construct_witt,
        "special": construct_special,
        "hamiltonian": construct_hamiltonian,
        "contact": construct_contact,
        "sl": construct_sl,
        "psl": construct_psl,
    }
    try:
        make = makers[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}") from None
    return make(n, p, max_dim=max_dim)


def expected_dim(family: str, n: int, p: int) -> int:
    """Closed-form dimension of the algebra built by ``construct(family, n, p)``."""
    if family == "witt":
        return n * p**n
    if family == "special":
        return (n - 1) * (p**n - 1)
    if family == "hamiltonian":
        return p**n - 2
    if family == "contact":
        return p**n - (1 if (n + 3) % p == 0 else 0)
    if family == "sl":
        return n * n - 1
    if family == "psl":
        return n * n - 2
    raise ValueError(f"unknown family {family!r}")
