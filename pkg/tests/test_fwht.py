import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from whsketch import fwht_rows, fwht_two_sided, fwht_vector, frobenius_norm_sq, hadamard_entry, hadamard_matrix, make_rng

from conftest import kron_hadamard

SIZES = [2**k for k in range(1, 11)]


def test_two_point_example():
    v = np.array([1.0, 1.0])
    fwht_vector(v)
    np.testing.assert_allclose(v, [math.sqrt(2.0), 0.0], atol=1e-15)


def test_length_one_is_identity():
    v = np.array([3.5])
    np.testing.assert_array_equal(fwht_vector(v), [3.5])


def test_in_place():
    v = np.arange(8.0)
    out = fwht_vector(v)
    assert out is v


@pytest.mark.parametrize("n", SIZES)
def test_involution_and_unitarity(n):
    rng = make_rng(n)
    v = rng.standard_normal(n)
    w = fwht_vector(v.copy())
    assert np.dot(w, w) == pytest.approx(np.dot(v, v), rel=1e-10)
    fwht_vector(w)
    np.testing.assert_allclose(w, v, rtol=0, atol=1e-10 * np.linalg.norm(v))


@pytest.mark.parametrize("n", [2, 4, 8, 16, 32])
def test_matches_dense_oracle(n):
    rng = make_rng(100 + n)
    v = rng.standard_normal(n)
    expected = hadamard_matrix(n) @ v
    np.testing.assert_allclose(fwht_vector(v.copy()), expected, rtol=0, atol=1e-12)


def test_hadamard_entry_examples():
    for n in (1, 2, 8, 64):
        for j in range(n):
            assert hadamard_entry(0, j, n) == pytest.approx(1.0 / math.sqrt(n))
    assert hadamard_entry(1, 1, 2) == pytest.approx(-1.0 / math.sqrt(2.0))
    with pytest.raises(IndexError):
        hadamard_entry(4, 0, 4)
    with pytest.raises(ValueError):
        hadamard_entry(0, 0, 6)


def test_entry_formula_matches_kronecker_construction():
    np.testing.assert_allclose(hadamard_matrix(8), kron_hadamard(8), rtol=0, atol=1e-15)


@pytest.mark.parametrize("n", [2, 4, 8, 16])
def test_two_sided_vec_trick(n):
    rng = make_rng(7 * n)
    m = rng.standard_normal((n, n))
    flat = m.reshape(-1).copy()
    fwht_vector(flat)
    np.testing.assert_allclose(fwht_two_sided(m), flat.reshape(n, n), rtol=0, atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 8, 128])
def test_two_sided_properties(n):
    rng = make_rng(n + 1)
    np.testing.assert_allclose(fwht_two_sided(np.eye(n)), np.eye(n), atol=1e-14)
    m = rng.standard_normal((n, n))
    t = fwht_two_sided(m)
    assert frobenius_norm_sq(t) == pytest.approx(frobenius_norm_sq(m), rel=1e-10)
    np.testing.assert_allclose(fwht_two_sided(t), m, atol=1e-10 * np.linalg.norm(m))
    h = kron_hadamard(n) if n <= 128 else None
    np.testing.assert_allclose(t, h @ m @ h, atol=1e-11)


def test_two_sided_does_not_mutate_input(rng):
    m = rng.standard_normal((8, 8))
    before = m.copy()
    fwht_two_sided(m)
    np.testing.assert_array_equal(m, before)


def test_rows_transform(rng):
    m = rng.standard_normal((4, 16))
    np.testing.assert_allclose(fwht_rows(m), m @ kron_hadamard(16), atol=1e-12)


def test_rejects_bad_lengths():
    with pytest.raises(ValueError):
        fwht_vector(np.ones(6))
    with pytest.raises(ValueError):
        fwht_two_sided(np.ones((6, 6)))
    with pytest.raises(TypeError):
        fwht_vector(np.ones(8, dtype=np.float32))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10), st.integers(0, 2**32 - 1))
def test_linearity(k, seed):
    n = 2**k
    rng = make_rng(seed)
    x, y = rng.standard_normal(n), rng.standard_normal(n)
    c = rng.standard_normal()
    lhs = fwht_vector(c * x + y)
    rhs = c * fwht_vector(x.copy()) + fwht_vector(y.copy())
    np.testing.assert_allclose(lhs, rhs, atol=1e-10 * (abs(c) * np.linalg.norm(x) + np.linalg.norm(y)))
