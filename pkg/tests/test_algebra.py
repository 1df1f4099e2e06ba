import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fmanifolds.algebra import (
    AlgebraError,
    FiniteAlgebra,
    ToleranceAmbiguity,
    bilinear_from_linear,
    decompose,
    direct_sum,
    is_frobenius,
    partition,
)
from oracles import change_basis, direct_sum as ds, invariant_form_exists, local_pool, random_algebra


def diag_algebra(n):
    c = np.zeros((n, n, n))
    for i in range(n):
        c[i, i, i] = 1
    return FiniteAlgebra(c, np.ones(n))


def truncated(k):
    """C[x]/(x^k) in the basis 1, x, ..., x^(k-1)."""
    c = np.zeros((k, k, k))
    for i in range(k):
        for j in range(k):
            if i + j < k:
                c[i, j, i + j] = 1
    return FiniteAlgebra(c)


def q2():
    c = np.zeros((3, 3, 3))
    c[0, 0, 0] = 1
    for i in (1, 2):
        c[0, i, i] = c[i, 0, i] = 1
    return FiniteAlgebra(c)


def i2_algebra(m, t2):
    c = np.zeros((2, 2, 2), dtype=complex)
    c[0, 0, 0] = c[0, 1, 1] = c[1, 0, 1] = 1
    c[1, 1, 0] = t2 ** (m - 2)
    return FiniteAlgebra(c)


def test_semisimple_diagonal():
    dec = decompose(diag_algebra(3))
    assert dec.partition == (1, 1, 1) and dec.semisimple
    idems = sorted(tuple(np.round(f.idempotent.real, 12)) for f in dec.factors)
    assert idems == sorted(tuple(row) for row in np.eye(3))
    for f in dec.factors:
        np.testing.assert_allclose(f.character, f.idempotent, atol=1e-12)


def test_q1_single_block():
    dec = decompose(truncated(3))
    assert dec.partition == (3,)
    f = dec.factors[0]
    np.testing.assert_allclose(f.idempotent, [1, 0, 0], atol=1e-12)
    np.testing.assert_allclose(f.character, [1, 0, 0], atol=1e-12)


def test_q2_partition():
    assert partition(q2()) == (3,)


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_i2_point_characters(m):
    t2 = 1.7
    dec = decompose(i2_algebra(m, t2))
    assert dec.partition == (1, 1)
    vals = sorted(f.character[1].real for f in dec.factors)
    r = t2 ** ((m - 2) / 2)
    assert vals == pytest.approx([-r, r])
    for f in dec.factors:
        assert f.character[0] == pytest.approx(1)


@pytest.mark.parametrize("m", [3, 4, 8])
def test_i2_partition_on_and_off_caustic(m):
    assert partition(i2_algebra(m, 0.0)) == (2,)
    assert partition(i2_algebra(m, 0.5)) == (1, 1)


def test_decomposition_invariants_and_reconstruction():
    rng = np.random.default_rng(3)
    P = rng.normal(size=(5, 5))
    c = change_basis(ds(np.eye(1).reshape(1, 1, 1), truncated(2).structure.real, truncated(2).structure.real), P)
    A = FiniteAlgebra(c, check=True)
    dec = decompose(A)
    assert dec.partition == (2, 2, 1)
    E = sum(f.idempotent for f in dec.factors)
    np.testing.assert_allclose(E, A.unit, atol=1e-8)
    for a in dec.factors:
        for b in dec.factors:
            prod = A.mult(a.idempotent, b.idempotent)
            np.testing.assert_allclose(prod, a.idempotent if a is b else 0, atol=1e-8)
    for i, a in enumerate(dec.factors):
        for b in dec.factors[i + 1:]:
            assert np.max(np.abs(a.character - b.character)) > 1e-6
    # multiplication restricted to blocks reproduces c
    x, y = rng.normal(size=5), rng.normal(size=5)
    rebuilt = sum(A.mult(A.mult(x, f.idempotent), A.mult(y, f.idempotent)) for f in dec.factors)
    np.testing.assert_allclose(rebuilt, A.mult(x, y), atol=1e-8)
    # characters are multiplicative
    for f in dec.factors:
        assert f.character @ A.mult(x, y) == pytest.approx((f.character @ x) * (f.character @ y), abs=1e-8)


def test_product_partition_is_union():
    A = direct_sum(truncated(2), diag_algebra(2))
    B = direct_sum(A, q2())
    assert partition(B) == tuple(sorted((2, 1, 1, 3), reverse=True))


def test_invalid_algebra_rejected():
    c = truncated(2).structure.copy()
    c[1, 1, 1] = 1
    c[1, 0, 1] = 2  # breaks commutativity and the unit
    with pytest.raises(AlgebraError):
        FiniteAlgebra(c, np.array([1, 0]))


def test_close_characters_raise_ambiguity():
    c = np.zeros((2, 2, 2))
    c[0, 0, 0] = c[1, 1, 1] = 1
    # basis e1 + e2, e2 scaled so the characters differ by ~1e-7 on a random element
    A = FiniteAlgebra(c, np.ones(2))
    dec = decompose(A, tol=1e-8)
    assert dec.partition == (1, 1)
    # characters +-1e-2 on d2: the trace form looks rank one at tol 1e-3,
    # while the eigenvalues of d2* are not nilpotent on a single block
    near = i2_algebra(4, 1e-2)
    with pytest.raises(ToleranceAmbiguity, match="tolerance ambiguity"):
        decompose(near, tol=1e-3)
    assert decompose(near, tol=1e-8).partition == (1, 1)


def test_frobenius_examples():
    r1 = is_frobenius(truncated(3))
    assert r1["frobenius"] and r1["socle_dimensions"] == [1]
    r2 = is_frobenius(q2())
    assert not r2["frobenius"] and r2["socle_dimensions"] == [2]
    r3 = is_frobenius(diag_algebra(4))
    assert r3["frobenius"] and r3["socle_dimensions"] == [1, 1, 1, 1]


def test_bilinear_from_linear_examples():
    g, ok = bilinear_from_linear(i2_algebra(5, 0.8), [0, 1])
    np.testing.assert_allclose(g, [[0, 1], [1, 0]], atol=1e-12)
    assert ok
    g, ok = bilinear_from_linear(truncated(3), [1, 0, 0])
    assert not ok
    g, ok = bilinear_from_linear(diag_algebra(3), [1, 1, 1])
    np.testing.assert_allclose(g, np.eye(3))
    assert ok


def gram_oracle(c, rng, trials=None):
    """Some g_f(x, y) = f(x y) nondegenerate over a basis of random covectors f."""
    n = c.shape[0]
    for _ in range(trials or n + 2):
        f = rng.normal(size=n)
        g = np.einsum("ijk,k->ij", c, f)
        if np.linalg.matrix_rank(g, tol=1e-8 * max(1.0, np.abs(g).max())) == n:
            return True
    return False


def test_frobenius_matches_bruteforce_oracles():
    rng = np.random.default_rng(2024)
    verdicts = []
    for _ in range(50):
        c = random_algebra(rng)
        verdict = is_frobenius(FiniteAlgebra(c))["frobenius"]
        assert verdict == invariant_form_exists(c)
        assert verdict == gram_oracle(c, rng)
        verdicts.append(verdict)
    # the sample must exercise both answers
    assert 5 <= sum(verdicts) <= 45


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_partition_sums_to_dimension(seed):
    rng = np.random.default_rng(seed)
    c = random_algebra(rng)
    assert sum(partition(FiniteAlgebra(c))) == c.shape[0]


def test_to_dict_shape():
    d = truncated(2).to_dict()
    assert d["dimension"] == 2 and len(d["structure"]) == 8
    assert d["structure"]["2,2,1"] == [0.0, 0.0]
