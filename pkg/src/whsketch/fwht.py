"""Fast Walsh-Hadamard transform, normalized so that it is orthogonal.

``H_n`` is symmetric and its own inverse, so every routine here is an
involution. The butterflies are unnormalized sums/differences; the
``1/sqrt(n)`` factor is applied once at the end of each transform.
"""

from __future__ import annotations

import math

import numpy as np

from .matrix import is_power_of_two


def _check_length(n: int) -> None:
    if not is_power_of_two(n):
        raise ValueError(f"transform length must be a power of two, got {n}")


def _butterflies_last_axis(x: np.ndarray) -> None:
    # x is C-contiguous with shape (batch, n); reshape returns views
    batch, n = x.shape
    scratch = np.empty(batch * n // 2)
    h = 1
    while h < n:
        v = x.reshape(batch, n // (2 * h), 2, h)
        top = scratch.reshape(batch, n // (2 * h), h)
        np.copyto(top, v[:, :, 0, :])
        v[:, :, 0, :] += v[:, :, 1, :]
        np.subtract(top, v[:, :, 1, :], out=v[:, :, 1, :])
        h *= 2


def _butterflies_first_axis(x: np.ndarray) -> None:
    # x is C-contiguous with shape (n, width); transforms every column
    n, width = x.shape
    scratch = np.empty(n * width // 2)
    h = 1
    while h < n:
        v = x.reshape(n // (2 * h), 2, h, width)
        top = scratch.reshape(n // (2 * h), h, width)
        np.copyto(top, v[:, 0])
        v[:, 0] += v[:, 1]
        np.subtract(top, v[:, 1], out=v[:, 1])
        h *= 2


def fwht_vector(v: np.ndarray) -> np.ndarray:
    """Replace ``v`` by ``H v`` in place and return it.

    ``v`` must be a contiguous float64 vector whose length is a power of two.
    """
    if v.ndim != 1:
        raise ValueError("fwht_vector expects a 1-d array")
    if v.dtype != np.float64 or not v.flags.c_contiguous:
        raise TypeError("fwht_vector needs a contiguous float64 buffer to work in place")
    n = v.size
    _check_length(n)
    _butterflies_last_axis(v.reshape(1, n))
    v *= 1.0 / math.sqrt(n)
    return v


def fwht_rows(m: np.ndarray) -> np.ndarray:
    """Return a new matrix whose rows are the transforms of the rows of ``m``, i.e. ``m H``."""
    out = np.array(m, dtype=np.float64, order="C", copy=True)
    _check_length(out.shape[1])
    _butterflies_last_axis(out)
    out *= 1.0 / math.sqrt(out.shape[1])
    return out


def fwht_two_sided(m: np.ndarray) -> np.ndarray:
    """Return ``H m H`` for a square matrix ``m``; O(n^2 log n).

    Rows are transformed first, then columns, and the combined ``1/n``
    normalization is applied in a single pass.
    """
    out = np.array(m, dtype=np.float64, order="C", copy=True)
    if out.ndim != 2 or out.shape[0] != out.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {out.shape}")
    n = out.shape[0]
    _check_length(n)
    _butterflies_last_axis(out)
    _butterflies_first_axis(out)
    out *= 1.0 / n
    return out


def hadamard_entry(i: int, j: int, n: int) -> float:
    """Entry ``(i, j)`` of the normalized ``H_n``: ``(-1)^popcount(i & j) / sqrt(n)``."""
    _check_length(n)
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"({i}, {j}) out of range for n={n}")
    sign = -1.0 if bin(i & j).count("1") % 2 else 1.0
    return sign / math.sqrt(n)


def hadamard_matrix(n: int) -> np.ndarray:
    """Dense ``H_n`` built entry by entry. Meant for test oracles at small n."""
    _check_length(n)
    return np.array([[hadamard_entry(i, j, n) for j in range(n)] for i in range(n)])
