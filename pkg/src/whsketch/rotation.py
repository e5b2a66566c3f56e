"""The sign-randomized Hadamard rotation ``W(m) = H D_left m D_right H`` and its inverse."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fwht import fwht_two_sided
from .matrix import as_signs, diag_scale, frobenius_norm_sq, is_power_of_two, random_signs


@dataclass(frozen=True)
class RotationKeys:
    """Sign vectors for one sketch: ``alpha`` (rows of the output), ``beta``
    (columns of the output) and ``gamma`` (the shared inner dimension)."""

    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        n = len(self.alpha)
        if not is_power_of_two(n):
            raise ValueError(f"key length must be a power of two, got {n}")
        as_signs(self.alpha, n, "alpha")
        as_signs(self.beta, n, "beta")
        as_signs(self.gamma, n, "gamma")

    @property
    def n(self) -> int:
        return len(self.alpha)

    @classmethod
    def draw(cls, n: int, rng: np.random.Generator) -> "RotationKeys":
        # draw order is part of the reproducibility contract: alpha, beta, gamma
        alpha = random_signs(n, rng)
        beta = random_signs(n, rng)
        gamma = random_signs(n, rng)
        return cls(alpha, beta, gamma)


def _check(m: np.ndarray, left: np.ndarray, right: np.ndarray) -> int:
    n = m.shape[0]
    if m.ndim != 2 or m.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if len(left) != n or len(right) != n:
        raise ValueError(
            f"sign vectors of length {len(left)}/{len(right)} do not match n={n}"
        )
    if not is_power_of_two(n):
        raise ValueError(f"n must be a power of two, got {n}")
    return n


def rotate(m: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Return ``H D_left m D_right H`` as a new matrix."""
    m = np.asarray(m, dtype=np.float64)
    _check(m, left, right)
    return fwht_two_sided(diag_scale(m, left, right))


def rotate_inverse(m: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Return ``D_left H m H D_right``, the exact inverse of :func:`rotate` with the same keys."""
    m = np.asarray(m, dtype=np.float64)
    _check(m, left, right)
    return diag_scale(fwht_two_sided(m), left, right)


def check_multiplicativity(a: np.ndarray, b: np.ndarray, keys: RotationKeys) -> tuple[float, float]:
    """Residuals of the product law for the rotation and for its inverse.

    Returns ``(forward, inverse)`` Frobenius norms of::

        rotate(a @ b, alpha, beta) - rotate(a, alpha, gamma) @ rotate(b, gamma, beta)
        rotate_inverse(a @ b, ...) - rotate_inverse(a, alpha, gamma) @ rotate_inverse(b, gamma, beta)
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.shape[0] != keys.n:
        raise ValueError(f"shapes {a.shape}, {b.shape} incompatible with keys of length {keys.n}")
    ab = a @ b
    al, be, ga = keys.alpha, keys.beta, keys.gamma
    fwd = rotate(ab, al, be) - rotate(a, al, ga) @ rotate(b, ga, be)
    inv = rotate_inverse(ab, al, be) - rotate_inverse(a, al, ga) @ rotate_inverse(b, ga, be)
    return float(np.sqrt(frobenius_norm_sq(fwd))), float(np.sqrt(frobenius_norm_sq(inv)))
