import numpy as np
import pytest

from conftest import algebra
from oracles import witt1_operator_power
from reslie.algebra import (
    AlgebraDescription,
    ClosureError,
    bracket_eval,
    derived_subalgebra,
    iterated_bracket,
    jacobi_check,
    jacobson_terms,
    p_power_eval,
    quotient_algebra,
    restrictedness_check,
    simplicity_check,
    subalgebra,
)
from reslie.constructors import construct_sl


def sl2(p=5):
    return algebra("sl", 2, p)


def test_description_validation():
    with pytest.raises(ValueError, match="i < j"):
        AlgebraDescription(5, 3, brackets=[(1, 0, 2, 1)])
    with pytest.raises(ValueError, match="duplicate"):
        AlgebraDescription(5, 3, brackets=[(0, 1, 2, 1), (0, 1, 2, 3)])
    with pytest.raises(IndexError):
        AlgebraDescription(5, 3, brackets=[(0, 3, 2, 1)])
    with pytest.raises(ValueError, match="whitespace"):
        AlgebraDescription(5, 2, labels=["a b", "c"])
    a = AlgebraDescription.from_structure(5, 3, [1, 0], [0, 1], [2, 2], [1, 3])
    # lenient constructor orients (1, 0) and sums with (0, 1): -1 + 3 = 2
    assert a.bracket == {(0, 1): {2: 2}}


def test_equality_and_structure():
    a = sl2()
    b = AlgebraDescription(a.p, a.dim, a.brackets, a.pmap_entries)
    assert a.same_structure(b) and a != b  # labels and name differ


def test_sl2_brackets():
    a = sl2()
    e, f, h = (a.basis_vector(a.index(s)) for s in ("E12", "E21", "h1"))
    assert np.array_equal(bracket_eval(a, e, f), h)
    assert np.array_equal(bracket_eval(a, h, e), 2 * e % 5)
    assert np.array_equal(bracket_eval(a, h, f), (-2 * f) % 5)
    # [e, f, f] = [h, f] = -2 f
    assert np.array_equal(iterated_bracket(a, e, f, 2), (-2 * f) % 5)


def test_sl_pmap_is_matrix_power():
    """v^[p] computed by the Jacobson fold equals the p-th matrix power (independent route)."""
    for m, p in [(2, 5), (3, 5), (3, 7), (4, 5)]:
        a = algebra("sl", m, p)
        rng = np.random.default_rng(m * p)
        basis_mats = []
        for lab in a.labels:
            e = np.zeros((m, m), dtype=np.int64)
            if lab.startswith("E"):
                e[int(lab[1]) - 1, int(lab[2]) - 1] = 1
            else:
                k = int(lab[1:])
                e[k - 1, k - 1], e[k, k] = 1, p - 1
            basis_mats.append(e)
        B = np.array(basis_mats)
        for _ in range(5):
            v = rng.integers(0, p, a.dim)
            M = np.tensordot(v, B, 1) % p
            P = np.eye(m, dtype=np.int64)
            for _ in range(p):
                P = P @ M % p
            got = np.tensordot(p_power_eval(a, v), B, 1) % p
            assert np.array_equal(got, P)


@pytest.mark.parametrize("p", [5, 7])
def test_witt1_pmap_is_operator_power(p):
    a = algebra("witt", 1, p)
    rng = np.random.default_rng(p)
    for _ in range(8):
        v = rng.integers(0, p, p)
        assert p_power_eval(a, v).tolist() == witt1_operator_power(p, v.tolist())


def test_p_power_order_independent():
    a = algebra("hamiltonian", 2, 5)
    rng = np.random.default_rng(3)
    for _ in range(5):
        v = rng.integers(0, 5, a.dim)
        assert np.array_equal(p_power_eval(a, v), p_power_eval(a, v, order=rng.permutation(a.dim)))


def test_jacobson_terms_extreme_coefficients():
    """At p = 5 only one word survives in each extreme t-degree of ad(tx + y)^4 (x)."""
    a = sl2()
    rng = np.random.default_rng(0)
    x, y = rng.integers(0, 5, (2, 3))
    s = jacobson_terms(a, x, y)
    # t^3: every word ending in ad(x) kills x, leaving ad(x)^3 ad(y) x
    ad = a.ad_dense
    want = ad(x) @ ad(x) @ ad(x) @ ad(y) @ x % 5
    assert np.array_equal(4 * s[3] % 5, want)
    # s_1 comes from the constant term: ad(y)^4 x
    want1 = np.linalg.matrix_power(ad(y), 4) @ x % 5
    assert np.array_equal(s[0], want1)


def test_jacobi_negative_control():
    a = algebra("witt", 1, 5)
    b = a.brackets.copy()
    b[0, 3] = (b[0, 3] + 1) % 5 or 1
    bad = AlgebraDescription(5, 5, b, a.pmap_entries)
    rep = jacobi_check(bad)
    assert not rep.passed and "triple" in rep.witness


def test_restrictedness_negative_control():
    a = sl2()
    pm = [(i, k, c) for i, k, c in a.pmap_entries.tolist()]
    pm[0] = (pm[0][0], pm[0][1], (pm[0][2] + 1) % 5 or 2)
    bad = AlgebraDescription(5, 3, a.brackets, pm)
    rep = restrictedness_check(bad, samples=5)
    assert not rep.passed and rep.witness["axiom"] == "a"


@pytest.mark.parametrize("key", [("witt", 1, 5), ("sl", 3, 5), ("psl", 5, 5), ("hamiltonian", 2, 5)])
def test_gates_pass(key):
    a = algebra(*key)
    assert jacobi_check(a).passed
    assert restrictedness_check(a, samples=10).passed
    rep = simplicity_check(a)
    assert rep.passed and rep.status == "simple"


def test_not_simple_direct_sum():
    a = sl2()
    d = a.dim
    b = np.vstack([a.brackets, a.brackets + [d, d, d, 0]])
    pm = np.vstack([a.pmap_entries, a.pmap_entries + [d, d, 0]])
    s = AlgebraDescription(5, 2 * d, b, pm)
    rep = simplicity_check(s)
    assert not rep.passed and rep.status == "not simple"


def test_sl_p_has_center():
    sl5 = construct_sl(5, 5, check_divisibility=False)
    rep = simplicity_check(sl5)
    assert not rep.passed and "center" in rep.message  # scalars are central when p | m


def test_derived_subalgebra_and_closure():
    a = sl2()
    full = np.eye(3, dtype=np.int64)
    assert derived_subalgebra(a, full).shape[0] == 3
    with pytest.raises(ClosureError):
        derived_subalgebra(a, [a.basis_vector(a.index("E12")), a.basis_vector(a.index("E21"))])


def test_subalgebra_borel():
    a = sl2()
    e, h = a.index("E12"), a.index("h1")
    rows = np.zeros((2, 3), dtype=np.int64)
    rows[0, e] = rows[1, h] = 1
    rows = rows[np.argsort([e, h])]
    b = subalgebra(a, rows, pmap_rows=a.pmap_matrix[sorted([e, h])])
    assert b.dim == 2 and jacobi_check(b).passed and restrictedness_check(b, samples=5).passed


def test_quotient_rejects_non_ideal():
    a = sl2()
    with pytest.raises(ClosureError):
        quotient_algebra(a, [a.basis_vector(0)])
