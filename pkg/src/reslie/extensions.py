"""Restricted one-dimensional central extensions E = g + Fc."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    AlgebraDescription,
    CheckReport,
    jacobi_check,
    p_power_eval,
    restrictedness_check,
)
from .cohomology import TwoCochain
from .constructors import construct_witt
from .gfp import FieldSpec, inv
from .restricted import FrobeniusCochain, RestrictedTwoCochain, _frobenius_pair, restricted_cocycle_check

__all__ = [
    "CentralExtension",
    "ExtensionError",
    "build_extension",
    "corollary_extension",
    "witt1_extension",
    "witt1_cocycle",
    "verify_extension_axioms",
]


class ExtensionError(ArithmeticError):
    pass


@dataclass(eq=False)
class CentralExtension:
    """An extension algebra (central element last) and the cocycle it came from."""

    algebra: AlgebraDescription
    source: AlgebraDescription = field(repr=False)
    cocycle: RestrictedTwoCochain = field(repr=False)
    provenance: str = ""

    @property
    def central_index(self) -> int:
        return self.algebra.dim - 1


def _extension_algebra(alg: AlgebraDescription, phi: TwoCochain, base_values, name: str) -> AlgebraDescription:
    d, p = alg.dim, alg.p
    b = alg.brackets
    pr = [(int(i), int(j), d, int(c)) for i, j, c in phi.items()]
    ent = np.vstack([b, np.asarray(pr, dtype=np.int64).reshape(-1, 4)])
    pm = alg.pmap_entries
    om = np.flatnonzero(base_values)
    pment = np.vstack([pm, np.column_stack([om, np.full(om.size, d), np.asarray(base_values)[om]])])
    labels = None
    if alg.labels:
        labels = list(alg.labels) + ["c" if "c" not in alg.labels else "c_central"]
    return AlgebraDescription.from_structure(
        p, d + 1, ent[:, 0], ent[:, 1], ent[:, 2], ent[:, 3], pment[:, 0], pment[:, 1], pment[:, 2], labels=labels, name=name
    )


def verify_extension_axioms(ext: CentralExtension, samples: int = 50, seed: int = 0) -> list[CheckReport]:
    """Jacobi, [p]-map axioms, centrality of c, c^[p] = 0, quotient recovery."""
    E, g = ext.algebra, ext.source
    c = ext.central_index
    out = [jacobi_check(E), restrictedness_check(E, samples=samples, seed=seed)]
    central = not E.ad_dense(E.basis_vector(c)).any()
    out.append(CheckReport("central", central, message="c is central" if central else "[x, c] != 0 for some x"))
    cp = p_power_eval(E, E.basis_vector(c))
    out.append(CheckReport("c^[p]=0", not cp.any(), message="c^[p] = 0" if not cp.any() else f"c^[p] = {cp.tolist()}"))
    b = E.brackets
    keep = b[:, 2] != c
    pm = E.pmap_entries
    pkeep = pm[:, 1] != c
    same = (
        E.dim == g.dim + 1
        and np.array_equal(b[keep], g.brackets)
        and np.array_equal(pm[pkeep], g.pmap_entries)
        and not (b[:, :2] == c).any()
    )
    out.append(CheckReport("quotient", bool(same), message="E / Fc recovers g" if same else "quotient differs from g"))
    return out


def build_extension(
    alg: AlgebraDescription, rc: RestrictedTwoCochain, verify: bool = True, samples: int = 50, seed: int = 0, name: str | None = None
) -> CentralExtension:
    """E = g + Fc with [x, y]_E = [x, y] + phi(x, y) c and x^[p]_E = x^[p] + omega(x) c."""
    nm = name or f"{alg.name or 'g'} + Fc"
    if verify:
        rep = restricted_cocycle_check(alg, rc, samples=min(samples, 10), seed=seed)
        if not rep.passed:
            raise ExtensionError(f"not a restricted cocycle: {rep.message}")
    E = _extension_algebra(alg, rc.phi, rc.omega.base_values, nm)
    ext = CentralExtension(E, alg, rc, provenance=f"central extension of {alg.name or 'g'} by restricted cocycle")
    if verify:
        for rep in verify_extension_axioms(ext, samples=samples, seed=seed):
            if not rep.passed:
                raise ExtensionError(f"extension fails {rep.check}: {rep.message}")
        rng = np.random.default_rng(seed)
        for _ in range(min(samples, 10)):
            v = rng.integers(0, alg.p, alg.dim)
            ve = np.append(v, 0)
            if p_power_eval(E, ve)[-1] != rc.omega(v):
                raise ExtensionError("central part of x^[p] in E disagrees with omega(x)")
    return ext


def corollary_extension(alg: AlgebraDescription, i: int, verify: bool = True, samples: int = 50, seed: int = 0) -> CentralExtension:
    """E_i: same bracket as g, x_j^[p] gains delta_ij c (0-based i)."""
    if not 0 <= i < alg.dim:
        raise IndexError(f"basis index {i} out of range 0..{alg.dim - 1}")
    ext = build_extension(alg, _frobenius_pair(alg, i), verify=verify, samples=samples, seed=seed, name=f"{alg.name or 'g'} E_{i}")
    ext.provenance = f"corollary extension E_{i}: restricted cocycle (0, omega_{i})"
    return ext


def witt1_cocycle(p: int) -> TwoCochain:
    """phi(e_j, e_k) = j (j^2 - 4) / 3 for j + k = 0 (integer indices -1..p-2)."""
    pairs = {}
    for j in range(-1, p - 1):
        k = -j
        if j < k <= p - 2:
            pairs[(j + 1, k + 1)] = j * (j * j - 4) * inv(3, p) % p
    return TwoCochain.from_pairs(p, p, pairs)


def witt1_extension(p: int, verify: bool = True, samples: int = 50, seed: int = 0) -> CentralExtension:
    """W(1) + Fc with [e_j, e_k] = (k - j) e_{j+k} + j(j^2-4)/3 delta_{0,j+k} c,
    e_j^[p] = delta_{0,j} e_0 and c^[p] = 0.
    """
    FieldSpec(p)
    W = construct_witt(1, p)
    d = p
    I, J, K, C = [], [], [], []
    third = inv(3, p)
    for j in range(-1, p - 1):
        for k in range(j + 1, p - 1):
            if -1 <= j + k <= p - 2 and k != j:
                I.append(j + 1)
                J.append(k + 1)
                K.append(j + k + 1)
                C.append(k - j)
            if j + k == 0:
                I.append(j + 1)
                J.append(k + 1)
                K.append(d)
                C.append(j * (j * j - 4) * third)
    E = AlgebraDescription.from_structure(
        p, d + 1, I, J, K, C, [1], [1], [1], labels=[f"e_{j}" for j in range(-1, p - 1)] + ["c"], name="W(1) + Fc"
    )
    phi = witt1_cocycle(p)
    rc = RestrictedTwoCochain(phi, FrobeniusCochain(W, np.zeros(d, dtype=np.int64), phi))
    ext = CentralExtension(E, W, rc, provenance="explicit W(1) extension with cocycle j(j^2-4)/3 delta_{0,j+k}")
    if verify:
        for rep in verify_extension_axioms(ext, samples=samples, seed=seed):
            if not rep.passed:
                raise ExtensionError(f"W(1) extension fails {rep.check}: {rep.message}")
    return ext
