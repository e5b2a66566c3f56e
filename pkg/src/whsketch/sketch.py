"""Approximate matrix multiplication by the fast Walsh-Hadamard sketch.

The sketch rotates both inputs so that the mass of the product is spread
evenly over its entries, computes only ``r * n`` entries of the rotated
product, and rotates the partial result back::

    A' = H D_alpha A D_gamma H,    B' = H D_gamma B D_beta H
    C' = A'B' on the sampled positions, 0 elsewhere
    C  = D_alpha H C' H D_beta     (times n / r for the unbiased estimator)

Total work is O(n^2 (r + log n)). With ``r == n`` the result is the exact
product up to rounding.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .matrix import as_matrix, is_power_of_two, make_rng
from .rotation import RotationKeys, rotate, rotate_inverse
from .sampling import IndexSet, SamplerMode, sample_indices


class Estimator(str, Enum):
    BIASED = "biased"
    UNBIASED = "unbiased"


@dataclass(frozen=True)
class SketchConfig:
    """Everything that determines a sketch, including its randomness.

    Random draws happen in a fixed order from one PCG64 stream seeded with
    ``seed``: alpha, beta, gamma (``n`` signs each), then the index sample.
    ``use_gamma=False`` still draws gamma but applies all-ones in its place;
    the estimate has the same distribution since gamma cancels.
    """

    n: int
    r: int
    estimator: Estimator = Estimator.BIASED
    sampler: SamplerMode = SamplerMode.UNIFORM
    seed: int | np.random.SeedSequence = 0
    use_gamma: bool = True

    def __post_init__(self):
        if not is_power_of_two(self.n):
            raise ValueError(f"n must be a power of two, got {self.n}")
        if not 1 <= self.r <= self.n:
            raise ValueError(f"r must satisfy 1 <= r <= n={self.n}, got {self.r}")
        object.__setattr__(self, "estimator", Estimator(self.estimator))
        object.__setattr__(self, "sampler", SamplerMode(self.sampler))
        if self.sampler is SamplerMode.ALL and self.r != self.n:
            raise ValueError(f"sampler 'all' requires r == n, got r={self.r}, n={self.n}")

    @property
    def scale(self) -> float:
        return self.n / self.r if self.estimator is Estimator.UNBIASED else 1.0


@dataclass
class SketchResult:
    estimate: np.ndarray
    keys: RotationKeys | None
    indices: IndexSet
    elapsed: dict[str, float] = field(default_factory=dict)


def _check_inputs(a, b, n: int) -> tuple[np.ndarray, np.ndarray]:
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape != (n, n) or b.shape != (n, n):
        raise ValueError(f"inputs of shape {a.shape} and {b.shape} do not match n={n}")
    return a, b


def exact_multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Classical dense product; the ground truth every estimate is compared against."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply shapes {a.shape} and {b.shape}")
    return a @ b


def partial_product(aprime: np.ndarray, bprime: np.ndarray, idx: IndexSet) -> np.ndarray:
    """Dense zero matrix with ``(aprime @ bprime)[i, j]`` filled in at each position of ``idx``.

    Positions are visited row by row, so each row of ``aprime`` is read once;
    the needed columns of ``bprime`` come from a transposed contiguous copy.
    """
    n = aprime.shape[0]
    if aprime.shape != (n, n) or bprime.shape != (n, n):
        raise ValueError(f"shapes {aprime.shape} and {bprime.shape} do not agree")
    if idx.n != n:
        raise IndexError(f"index set for n={idx.n} used with n={n}")
    out = np.zeros((n, n))
    if len(idx) == 0:
        return out
    bt = np.ascontiguousarray(bprime.T)
    rows, cols = idx.rows, idx.cols
    bounds = np.searchsorted(rows, np.arange(n + 1))
    for i in range(n):
        lo, hi = bounds[i], bounds[i + 1]
        if lo == hi:
            continue
        if hi - lo == n:
            out[i] = bt @ aprime[i]
        else:
            c = cols[lo:hi]
            out[i, c] = bt[c] @ aprime[i]
    return out


def sketch_multiply(a: np.ndarray, b: np.ndarray, cfg: SketchConfig) -> SketchResult:
    """Estimate ``a @ b`` with the Walsh-Hadamard sketch described by ``cfg``.

    ``E[C] = (r/n) AB`` and ``E||C - AB||_F^2 = (1 - r/n) ||AB||_F^2`` for the
    biased estimator; the unbiased one has ``E[C] = AB`` and total squared
    error ``(n/r - 1) ||AB||_F^2``. Both moments assume the uniform sampler.
    """
    n = cfg.n
    a, b = _check_inputs(a, b, n)
    rng = make_rng(cfg.seed)
    keys = RotationKeys.draw(n, rng)
    idx = sample_indices(cfg.sampler, n, cfg.r, rng)
    gamma = keys.gamma if cfg.use_gamma else np.ones(n)

    t0 = time.perf_counter()
    aprime = rotate(a, keys.alpha, gamma)
    bprime = rotate(b, gamma, keys.beta)
    t1 = time.perf_counter()
    cprime = partial_product(aprime, bprime, idx)
    t2 = time.perf_counter()
    c = rotate_inverse(cprime, keys.alpha, keys.beta)
    if cfg.estimator is Estimator.UNBIASED:
        c *= cfg.scale
    t3 = time.perf_counter()
    return SketchResult(c, keys, idx, {"rotate": t1 - t0, "partial": t2 - t1, "inverse": t3 - t2})


def naive_sample_multiply(a: np.ndarray, b: np.ndarray, cfg: SketchConfig) -> SketchResult:
    """Baseline: compute ``r * n`` entries of ``a @ b`` directly and leave the rest zero.

    Same totals as the sketch in expectation, but the error of entry
    ``(i, j)`` is proportional to ``(AB)_ij^2`` rather than to the average.
    The stream draws only the index sample.
    """
    n = cfg.n
    a, b = _check_inputs(a, b, n)
    rng = make_rng(cfg.seed)
    idx = sample_indices(cfg.sampler, n, cfg.r, rng)
    t0 = time.perf_counter()
    c = partial_product(a, b, idx)
    if cfg.estimator is Estimator.UNBIASED:
        c *= cfg.scale
    t1 = time.perf_counter()
    return SketchResult(c, None, idx, {"rotate": 0.0, "partial": t1 - t0, "inverse": 0.0})
