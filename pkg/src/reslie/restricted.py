"""Restricted 2-cochains (phi, omega) and a constructive basis of H^2_*.

omega is a p-semilinear-up-to-correction map g -> F tied to a 2-cochain phi:
its additivity defect on (u, w) is the central coordinate of the Jacobson
correction sum_i s_i(u, w) in the provisional extension g + Fc with
bracket [x, y] + phi(x, y) c.  Given phi and the values of omega on a basis,
omega is evaluated everywhere by folding over the support of the argument.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgebraDescription, CheckReport, _ad_poly, _inverses
from .cohomology import (
    CochainError,
    OneCochain,
    TwoCochain,
    _check_phi,
    delta1_matrix,
    delta_map,
    delta_map_table,
    h2_basis,
    is_cocycle,
)
from .gfp import SparseMatrix, matmul_mod, rank

__all__ = [
    "FrobeniusCochain",
    "RestrictedTwoCochain",
    "RestrictedReport",
    "star_defect",
    "star_extend",
    "frobenius_basis",
    "restricted_cocycle_check",
    "restricted_coboundary",
    "h2star_basis",
]


def _defect(alg: AlgebraDescription, Phi: np.ndarray, adu, adw, u, w) -> int:
    p = alg.p
    V = _ad_poly(adu, adw, u, p - 2, p)  # ad(t u + w)^(p-2)(u), degrees 0..p-2
    wPhi = matmul_mod(w[None, :], Phi, p)[0]
    uPhi = matmul_mod(u[None, :], Phi, p)[0]
    coef = matmul_mod(V, wPhi, p)  # phi(w, V_k)
    coef[1:] = (coef[1:] + matmul_mod(V[:-1], uPhi, p)) % p  # + phi(u, V_{k-1})
    return int(np.dot(coef % p, _inverses(p)) % p)


def star_defect(alg: AlgebraDescription, phi: TwoCochain, u, w) -> int:
    """Central coordinate of sum_i s_i(u, w) in the extension twisted by phi.

    Equals sum_{i=1}^{p-1} (1/i) [t^(i-1)] phi(t u + w, ad(t u + w)^(p-2)(u)).
    """
    _check_phi(alg, phi)
    u = alg.check_vector(u)
    w = alg.check_vector(w)
    if phi.is_zero():
        return 0
    return _defect(alg, phi.matrix(), alg.ad_dense(u), alg.ad_dense(w), u, w)


@dataclass(eq=False)
class FrobeniusCochain:
    """omega: g -> F given by basis values and the *-property relative to ``partner``."""

    alg: AlgebraDescription = field(repr=False)
    base_values: np.ndarray
    partner: TwoCochain = field(repr=False)

    def __post_init__(self):
        self.base_values = np.asarray(self.base_values, dtype=np.int64) % self.alg.p
        if self.base_values.shape != (self.alg.dim,):
            raise CochainError(f"expected {self.alg.dim} base values")
        self._Phi = None

    def __call__(self, v, order=None) -> int:
        alg = self.alg
        p = alg.p
        v = alg.check_vector(v)
        seq = range(alg.dim) if order is None else order
        support = [int(j) for j in seq if v[j]]
        base = sum(pow(int(v[j]), p, p) * int(self.base_values[j]) for j in support) % p
        if self.partner.is_zero() or len(support) < 2:
            return base
        if self._Phi is None:
            self._Phi = self.partner.matrix()
        u = alg.zero()
        adu = np.zeros((alg.dim, alg.dim), dtype=np.int64)
        total = base
        for j in support:
            w = alg.zero()
            w[j] = v[j]
            adw = alg.ad_scaled_basis(j, int(v[j]))
            if u.any():
                total += _defect(alg, self._Phi, adu, adw, u, w)
            u = (u + w) % p
            adu = (adu + adw) % p
        return total % p


@dataclass(eq=False)
class RestrictedTwoCochain:
    phi: TwoCochain
    omega: FrobeniusCochain

    def vector(self) -> np.ndarray:
        """phi on basis pairs followed by omega on basis vectors."""
        return np.concatenate([self.phi.values, self.omega.base_values])


@dataclass
class RestrictedReport:
    h2star_dim: int
    basis: list[RestrictedTwoCochain]
    h2_dim: int
    checks: list[CheckReport] = field(default_factory=list, repr=False)

    @property
    def frobenius_part(self) -> list[RestrictedTwoCochain]:
        return self.basis[: len(self.basis) - self.h2_dim]

    @property
    def lifted_part(self) -> list[RestrictedTwoCochain]:
        return self.basis[len(self.basis) - self.h2_dim :]


def star_extend(alg: AlgebraDescription, phi: TwoCochain, base_values=None) -> FrobeniusCochain:
    """The omega with prescribed basis values having the *-property for the cocycle phi."""
    _check_phi(alg, phi)
    if not is_cocycle(alg, phi):
        raise CochainError("phi is not a cocycle; star-extension is only well defined for cocycles")
    if base_values is None:
        base_values = np.zeros(alg.dim, dtype=np.int64)
    return FrobeniusCochain(alg, base_values, phi)


def _frobenius_pair(alg: AlgebraDescription, i: int) -> RestrictedTwoCochain:
    zero = TwoCochain.zero(alg.dim, alg.p)
    return RestrictedTwoCochain(zero, FrobeniusCochain(alg, alg.basis_vector(i), zero))


def frobenius_basis(alg: AlgebraDescription, check: bool = True, samples: int = 5, seed: int = 0) -> list[RestrictedTwoCochain]:
    """The pairs (0, omega_i) with omega_i(sum a_j x_j) = a_i^p."""
    out = [_frobenius_pair(alg, i) for i in range(alg.dim)]
    if check:
        for i, rc in enumerate(out):
            rep = restricted_cocycle_check(alg, rc, samples=samples, seed=seed + i)
            if not rep.passed:
                raise ArithmeticError(f"(0, omega_{i}) failed: {rep.message}")
    return out


def restricted_cocycle_check(
    alg: AlgebraDescription, rc: RestrictedTwoCochain, samples: int = 20, seed: int = 0
) -> CheckReport:
    """(a) delta^2 phi = 0; (b) the Delta map vanishes; (c) omega has the *-property and is p-semilinear."""
    p, d = alg.p, alg.dim
    phi, omega = rc.phi, rc.omega
    fails = []
    if not is_cocycle(alg, phi):
        return CheckReport("restricted-cocycle", False, message="(a) phi is not a cocycle", witness={"part": "a"}, seed=seed)
    table = delta_map_table(alg, phi)
    if table.any():
        a, b = map(int, np.argwhere(table)[0])
        fails.append(("b", f"Delta(x_{a}, x_{b}) = {table[a, b]}", {"pair": (a, b)}))
    rng = np.random.default_rng(seed)
    for s in range(samples):
        g = rng.integers(0, p, d)
        h = rng.integers(0, p, d)
        val = delta_map(alg, phi, g, h)
        if val:
            fails.append(("b", f"Delta nonzero on random pair {s}", {"g": g.tolist(), "h": h.tolist(), "value": val}))
            break
    for s in range(samples):
        u = rng.integers(0, p, d)
        w = rng.integers(0, p, d)
        lhs = (omega(((u + w) % p)) - omega(u) - omega(w)) % p
        rhs = star_defect(alg, phi, u, w)
        if lhs != rhs:
            fails.append(("c", f"*-property fails on sample {s}", {"u": u.tolist(), "w": w.tolist()}))
            break
        lam = int(rng.integers(1, p))
        if omega(lam * u % p) != pow(lam, p, p) * omega(u) % p:
            fails.append(("c", f"omega(l x) != l^p omega(x) on sample {s}", {"u": u.tolist(), "lambda": lam}))
            break
    if fails:
        part, msg, wit = fails[0]
        return CheckReport("restricted-cocycle", False, message=f"({part}) {msg}", witness={"part": part, **wit}, seed=seed)
    return CheckReport("restricted-cocycle", True, message="restricted cocycle", seed=seed)


def restricted_coboundary(alg: AlgebraDescription, psi) -> RestrictedTwoCochain:
    """(delta^1 psi, omega_psi) with omega_psi(x_i) = psi(x_i^[p])."""
    vals = psi.values if isinstance(psi, OneCochain) else np.asarray(psi, dtype=np.int64)
    vals = vals % alg.p
    phi = TwoCochain(alg.dim, alg.p, delta1_matrix(alg).matvec(vals))
    base = matmul_mod(alg.pmap_matrix, vals, alg.p)
    return RestrictedTwoCochain(phi, FrobeniusCochain(alg, base, phi))


def _restricted_coboundary_rows(alg: AlgebraDescription) -> SparseMatrix:
    """Row c: the restricted coboundary of the dual basis functional x_c^*."""
    d1 = delta1_matrix(alg)
    npairs = d1.rows
    pm = alg.pmap_matrix
    r, c = np.nonzero(pm.T)  # row c, column i: psi_c(x_i^[p]) = pm[i, c]
    return SparseMatrix(
        alg.dim,
        npairs + alg.dim,
        alg.p,
        np.concatenate([d1.col, r]),
        np.concatenate([d1.row, npairs + c]),
        np.concatenate([d1.val, pm.T[r, c]]),
    )


def independent_mod_coboundaries(alg: AlgebraDescription, cochains: list[RestrictedTwoCochain]) -> bool:
    """True when the classes of ``cochains`` are independent modulo restricted coboundaries."""
    cob = _restricted_coboundary_rows(alg)
    if not cochains:
        return True
    cand = SparseMatrix.from_dense(np.vstack([rc.vector() for rc in cochains]), alg.p)
    return rank(cob.vstack(cand)) == rank(cob) + len(cochains)


def h2star_basis(alg: AlgebraDescription, check: bool = True, samples: int = 10, seed: int = 0) -> RestrictedReport:
    """Frobenius pairs (0, omega_i) followed by one lift (phi, omega_phi) per H^2 representative."""
    coh = h2_basis(alg)
    basis = frobenius_basis(alg, check=False)
    for phi in coh.h2_reps:
        basis.append(RestrictedTwoCochain(phi, star_extend(alg, phi)))
    checks = []
    if check:
        for k, rc in enumerate(basis):
            rep = restricted_cocycle_check(alg, rc, samples=samples, seed=seed + k)
            checks.append(rep)
            if not rep.passed:
                raise ArithmeticError(f"basis element {k} is not a restricted cocycle: {rep.message}")
        if not independent_mod_coboundaries(alg, basis):
            raise ArithmeticError("restricted basis is dependent modulo restricted coboundaries")
    return RestrictedReport(h2star_dim=len(basis), basis=basis, h2_dim=coh.h2_dim, checks=checks)
