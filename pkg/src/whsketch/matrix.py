"""Dense square matrices, sign vectors and the test-matrix generators.

Matrices are plain ``numpy.ndarray`` objects of dtype float64 and shape
``(n, n)``, C-contiguous (row-major). Sign vectors are float64 arrays with
entries in {+1, -1} so they broadcast directly against matrix rows/columns.

All randomness flows through a ``numpy.random.Generator`` (PCG64), which is
the "seed stream" of this package: single-owner, consumed in a fixed order.
"""

from __future__ import annotations

import numpy as np

GENERATOR_KINDS = ("gaussian", "rademacher", "spiky", "rank-one", "zero", "identity")


def is_power_of_two(n: int) -> bool:
    return isinstance(n, (int, np.integer)) and n >= 1 and (n & (n - 1)) == 0


def next_power_of_two(n: int) -> int:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return 1 << (n - 1).bit_length()


def make_rng(seed) -> np.random.Generator:
    """Return a PCG64 generator for an int seed, a SeedSequence or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Validate ``m`` as a finite square float64 matrix and return it (copying only if needed)."""
    arr = np.ascontiguousarray(m, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValueError(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return arr


def as_signs(s, n: int | None = None, name: str = "signs") -> np.ndarray:
    arr = np.asarray(s, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d vector")
    if n is not None and arr.size != n:
        raise ValueError(f"{name} has length {arr.size}, expected {n}")
    if not np.all(np.abs(arr) == 1.0):
        raise ValueError(f"{name} entries must be exactly +1 or -1")
    return arr


def frobenius_norm_sq(m: np.ndarray) -> float:
    """Sum of squared entries, accumulated row by row in row-major order."""
    m = np.asarray(m, dtype=np.float64)
    # fixed order: per-row dot products, then a left-to-right sum over rows
    total = 0.0
    for row in m:
        total += float(np.dot(row, row))
    return total


def diag_scale(m: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Return ``D_left @ m @ D_right`` without forming the diagonal matrices.

    Only lengths are checked here; sign vectors are validated where they are
    built (:func:`random_signs`, :class:`~whsketch.rotation.RotationKeys`).
    """
    m = np.asarray(m, dtype=np.float64)
    n = m.shape[0]
    if m.shape != (n, n) or len(left) != n or len(right) != n:
        raise ValueError(
            f"matrix shape {m.shape} does not match sign lengths {len(left)}, {len(right)}"
        )
    return np.asarray(left, dtype=np.float64)[:, None] * m * np.asarray(right, dtype=np.float64)[None, :]


def random_signs(n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` independent uniform signs from ``rng``."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    bits = rng.integers(0, 2, size=n, dtype=np.int8)
    return 1.0 - 2.0 * bits


def generate(kind: str, n: int, rng: np.random.Generator) -> np.ndarray:
    """Build an ``n x n`` test matrix.

    gaussian
        i.i.d. standard normal, drawn with ``Generator.standard_normal``
        (ziggurat on PCG64 output; bit-stable across platforms for a fixed
        numpy version).
    rademacher
        i.i.d. uniform signs.
    spiky
        zero except entry (0, 0), which is ``+-n`` with a random sign. Its
        Frobenius norm matches a Rademacher matrix of the same size.
    rank-one
        outer product of two independent standard normal vectors.
    zero, identity
        as named; they consume no randomness.
    """
    if not is_power_of_two(n):
        raise ValueError(f"n must be a power of two, got {n}")
    if kind == "gaussian":
        return rng.standard_normal((n, n))
    if kind == "rademacher":
        return random_signs(n * n, rng).reshape(n, n)
    if kind == "spiky":
        m = np.zeros((n, n))
        m[0, 0] = n * random_signs(1, rng)[0]
        return m
    if kind == "rank-one":
        u = rng.standard_normal(n)
        v = rng.standard_normal(n)
        return np.outer(u, v)
    if kind == "zero":
        return np.zeros((n, n))
    if kind == "identity":
        return np.eye(n)
    raise ValueError(f"unknown generator kind {kind!r}; expected one of {GENERATOR_KINDS}")
