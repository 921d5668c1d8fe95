import numpy as np
import pytest

from conftest import algebra
from reslie.algebra import AlgebraDescription, bracket_eval, p_power_eval
from reslie.cohomology import TwoCochain, h2_basis, is_coboundary, is_cocycle
from reslie.extensions import (
    CentralExtension,
    ExtensionError,
    build_extension,
    corollary_extension,
    verify_extension_axioms,
    witt1_cocycle,
    witt1_extension,
)
from reslie.gfp import inv
from reslie.restricted import FrobeniusCochain, RestrictedTwoCochain, h2star_basis


def _all_pass(ext, samples=50):
    return {r.check: r.passed for r in verify_extension_axioms(ext, samples=samples)}


def test_witt1_extension_examples_p5():
    E = witt1_extension(5).algebra
    e = lambda j: E.basis_vector(j + 1)  # noqa: E731
    c = E.basis_vector(5)
    assert np.array_equal(bracket_eval(E, e(1), e(-1)), (3 * e(0) + 4 * c) % 5)
    assert np.array_equal(bracket_eval(E, e(-1), e(1)), (2 * e(0) + c) % 5)
    assert E.labels == ("e_-1", "e_0", "e_1", "e_2", "e_3", "c")


def test_witt1_extension_pmap_p7():
    E = witt1_extension(7).algebra
    assert np.array_equal(p_power_eval(E, E.basis_vector(1)), E.basis_vector(1))
    assert not p_power_eval(E, E.basis_vector(7)).any()
    for j in (0, 2, 3, 4, 5, 6):
        assert not p_power_eval(E, E.basis_vector(j)).any()


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_witt1_central_term_is_odd(p):
    f = lambda j: j * (j * j - 4) * inv(3, p) % p  # noqa: E731
    for j in range(-1, p - 1):
        if -1 <= -j <= p - 2:
            assert f(j) == (-f(-j)) % p


@pytest.mark.parametrize("p", [5, 7])
def test_witt1_extension_axioms(p):
    assert all(_all_pass(witt1_extension(p, verify=False)).values())


@pytest.mark.parametrize("p", [7, 11])
def test_congruence_reading_breaks_cocycle(p):
    """Reading the Kronecker delta mod p adds pairs with j + k = p and destroys the cocycle property."""
    W = algebra("witt", 1, p)
    vals = {}
    for j in range(-1, p - 1):
        for k in range(j + 1, p - 1):
            if (j + k) % p == 0:
                vals[(j + 1, k + 1)] = j * (j * j - 4) * inv(3, p) % p
    phi = TwoCochain.from_pairs(p, p, vals)
    assert phi != witt1_cocycle(p)
    assert not is_cocycle(W, phi)
    assert is_cocycle(W, witt1_cocycle(p))


@pytest.mark.parametrize("p", [5, 7])
def test_witt1_class_best_fit_scaling(p):
    """phi - lam * rep is a coboundary for some lam; the fit returns lam = 0 only."""
    W = algebra("witt", 1, p)
    phi = witt1_cocycle(p)
    rep = h2star_basis(W, check=False).lifted_part[0].phi
    fits = [lam for lam in range(p) if is_coboundary(W, phi - rep * lam) is not None]
    assert fits == [0]


def test_corollary_extension_witt1_e0():
    W = algebra("witt", 1, 5)
    i = W.index("e_0")
    ext = corollary_extension(W, i)
    E = ext.algebra
    assert E.dim == 6 and ext.central_index == 5
    for j in range(5):
        want = np.append(W.pmap_matrix[j], 1 if j == i else 0)
        assert np.array_equal(p_power_eval(E, E.basis_vector(j)), want)
        assert not bracket_eval(E, E.basis_vector(j), E.basis_vector(5)).any()
    assert "E_1" in ext.provenance


@pytest.mark.parametrize("i", range(3))
def test_corollary_extension_sl2(i):
    ext = corollary_extension(algebra("sl", 2, 5), i)
    assert ext.algebra.dim == 4 and all(_all_pass(ext, samples=10).values())


def test_corollary_index_range():
    with pytest.raises(IndexError):
        corollary_extension(algebra("sl", 2, 5), 3)


def test_trivial_extension_is_direct_sum():
    g = algebra("sl", 2, 5)
    zero = TwoCochain.zero(3, 5)
    ext = build_extension(g, RestrictedTwoCochain(zero, FrobeniusCochain(g, np.zeros(3), zero)))
    E = ext.algebra
    assert np.array_equal(E.brackets, g.brackets) and np.array_equal(E.pmap_entries, g.pmap_entries)


def test_lifted_cocycle_extension_h2():
    g = algebra("hamiltonian", 2, 5)
    rc = h2star_basis(g, check=False).lifted_part[1]
    ext = build_extension(g, rc, samples=10)
    rng = np.random.default_rng(0)
    for _ in range(3):
        v = rng.integers(0, 5, g.dim)
        assert p_power_eval(ext.algebra, np.append(v, 0))[-1] == rc.omega(v)


def test_corrupted_extension_fails():
    """Adding c to [e_0, e_1] gives a central term that is not a cocycle."""
    ext = witt1_extension(5)
    E = ext.algebra
    b = np.vstack([E.brackets, [[1, 2, 5, 1]]])
    bad = CentralExtension(AlgebraDescription(5, 6, b, E.pmap_entries), ext.source, ext.cocycle)
    res = _all_pass(bad, samples=20)
    assert not res["jacobi"]


def test_build_rejects_invalid_cocycle():
    g = algebra("hamiltonian", 2, 5)
    phi = h2_basis(g).h2_reps[0]
    wrong = RestrictedTwoCochain(phi, FrobeniusCochain(g, np.zeros(g.dim), TwoCochain.zero(g.dim, 5)))
    with pytest.raises(ExtensionError):
        build_extension(g, wrong, samples=20)
