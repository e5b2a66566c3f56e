from fractions import Fraction

import numpy as np
import pytest

from whsketch import (
    RotationKeys,
    check_multiplicativity,
    frobenius_norm_sq,
    hadamard_matrix,
    make_rng,
    random_signs,
    rotate,
    rotate_inverse,
)


def dense_rotate(m, left, right):
    h = hadamard_matrix(m.shape[0])
    return h @ np.diag(left) @ m @ np.diag(right) @ h


def dense_rotate_inverse(m, left, right):
    h = hadamard_matrix(m.shape[0])
    return np.diag(left) @ h @ m @ h @ np.diag(right)


def test_identity_keys_fix_identity():
    ones = np.ones(8)
    np.testing.assert_allclose(rotate(np.eye(8), ones, ones), np.eye(8), atol=1e-14)
    np.testing.assert_allclose(rotate_inverse(np.eye(8), ones, ones), np.eye(8), atol=1e-14)


def test_against_dense_oracle(rng):
    m = rng.standard_normal((4, 4))
    a, b = random_signs(4, rng), random_signs(4, rng)
    np.testing.assert_allclose(rotate(m, a, b), dense_rotate(m, a, b), rtol=0, atol=1e-12)
    np.testing.assert_allclose(rotate_inverse(m, a, b), dense_rotate_inverse(m, a, b), rtol=0, atol=1e-12)


@pytest.mark.parametrize("n", [2, 16, 64, 256])
def test_unitary_and_invertible(n):
    rng = make_rng(n)
    m = rng.standard_normal((n, n))
    a, b = random_signs(n, rng), random_signs(n, rng)
    w = rotate(m, a, b)
    assert frobenius_norm_sq(w) == pytest.approx(frobenius_norm_sq(m), rel=1e-10)
    back = rotate_inverse(w, a, b)
    assert np.linalg.norm(back - m) <= 1e-10 * np.linalg.norm(m)
    assert np.linalg.norm(rotate(rotate_inverse(m, a, b), a, b) - m) <= 1e-10 * np.linalg.norm(m)


def test_linearity(rng):
    n = 32
    m1, m2 = rng.standard_normal((n, n)), rng.standard_normal((n, n))
    a, b = random_signs(n, rng), random_signs(n, rng)
    x = 2.75
    lhs = rotate(x * m1 + m2, a, b)
    rhs = x * rotate(m1, a, b) + rotate(m2, a, b)
    assert np.linalg.norm(lhs - rhs) <= 1e-10 * np.linalg.norm(lhs)


def test_rotate_does_not_mutate(rng):
    m = rng.standard_normal((8, 8))
    before = m.copy()
    rotate(m, np.ones(8), -np.ones(8))
    np.testing.assert_array_equal(m, before)


def test_multiplicativity_examples(rng):
    n = 32
    a, b = rng.standard_normal((n, n)), rng.standard_normal((n, n))
    keys = RotationKeys.draw(n, rng)
    fwd, inv = check_multiplicativity(a, b, keys)
    scale = np.linalg.norm(a @ b)
    assert fwd <= 1e-9 * scale and inv <= 1e-9 * scale
    fwd, inv = check_multiplicativity(np.eye(n), np.eye(n), keys)
    assert fwd <= 1e-13 and inv <= 1e-13


def _sign_matrix(n):
    return [[-1 if bin(i & j).count("1") % 2 else 1 for j in range(n)] for i in range(n)]


def _exact_rotate(m, left, right):
    # H D_l M D_r H = S D_l M D_r S / n with S the +-1 Sylvester matrix: rational throughout
    n = len(m)
    s = _sign_matrix(n)
    x = [[Fraction(int(left[i])) * m[i][j] * int(right[j]) for j in range(n)] for i in range(n)]
    sx = [[sum(s[i][k] * x[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return [[sum(sx[i][k] * s[k][j] for k in range(n)) / n for j in range(n)] for i in range(n)]


def _exact_matmul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def test_float_rotation_product_matches_exact_rational_oracle():
    n = 8
    rng = make_rng(99)
    a, b = rng.standard_normal((n, n)), rng.standard_normal((n, n))
    keys = RotationKeys.draw(n, rng)
    fa = [[Fraction(float(v)) for v in row] for row in a]
    fb = [[Fraction(float(v)) for v in row] for row in b]
    exact = _exact_matmul(_exact_rotate(fa, keys.alpha, keys.gamma), _exact_rotate(fb, keys.gamma, keys.beta))
    exact_ab_rot = _exact_rotate(_exact_matmul(fa, fb), keys.alpha, keys.beta)
    # the product law holds exactly in rational arithmetic
    assert exact == exact_ab_rot
    approx = rotate(a, keys.alpha, keys.gamma) @ rotate(b, keys.gamma, keys.beta)
    exact_f = np.array([[float(v) for v in row] for row in exact])
    assert np.linalg.norm(approx - exact_f) <= 1e-12 * np.linalg.norm(exact_f)
    fwd, _ = check_multiplicativity(a, b, keys)
    assert fwd <= 1e-12 * np.linalg.norm(exact_f)


def test_keys_validate():
    with pytest.raises(ValueError):
        RotationKeys(np.ones(4), np.ones(4), np.ones(2))
    with pytest.raises(ValueError):
        RotationKeys(np.ones(3), np.ones(3), np.ones(3))
    with pytest.raises(ValueError):
        RotationKeys(np.ones(4), np.ones(4), np.array([1.0, 1.0, 0.0, 1.0]))


def test_keys_draw_order_is_fixed():
    k1 = RotationKeys.draw(16, make_rng(4))
    rng = make_rng(4)
    alpha, beta, gamma = random_signs(16, rng), random_signs(16, rng), random_signs(16, rng)
    np.testing.assert_array_equal(k1.alpha, alpha)
    np.testing.assert_array_equal(k1.beta, beta)
    np.testing.assert_array_equal(k1.gamma, gamma)


def test_rejects_mismatch(rng):
    with pytest.raises(ValueError):
        rotate(np.eye(4), np.ones(2), np.ones(4))
    with pytest.raises(ValueError):
        rotate(np.eye(6), np.ones(6), np.ones(6))
    with pytest.raises(ValueError):
        check_multiplicativity(np.eye(4), np.eye(8), RotationKeys.draw(4, rng))
