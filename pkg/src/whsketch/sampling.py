"""Choice of the ``r*n`` output positions that a sketch actually computes."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .matrix import is_power_of_two


class SamplerMode(str, Enum):
    UNIFORM = "uniform-random"
    FIRST_ROWS = "first-rows"
    ALL = "all"


@dataclass(frozen=True)
class IndexSet:
    """Distinct positions of an ``n x n`` matrix, stored sorted in row-major order.

    ``flat`` holds the linear indices ``row * n + col``.
    """

    n: int
    flat: np.ndarray

    def __post_init__(self):
        flat = np.asarray(self.flat, dtype=np.int64)
        if flat.ndim != 1:
            raise ValueError("flat indices must be 1-d")
        if flat.size and (flat[0] < 0 or flat[-1] >= self.n * self.n):
            raise IndexError("position out of range")
        if flat.size > 1 and np.any(np.diff(flat) <= 0):
            raise ValueError("positions must be strictly increasing (sorted, no duplicates)")
        flat.setflags(write=False)
        object.__setattr__(self, "flat", flat)

    @classmethod
    def from_positions(cls, n: int, positions) -> "IndexSet":
        pos = np.asarray(list(positions), dtype=np.int64).reshape(-1, 2)
        if pos.size and (pos.min() < 0 or pos.max() >= n):
            raise IndexError("position out of range")
        flat = np.unique(pos[:, 0] * n + pos[:, 1])
        if flat.size != len(pos):
            raise ValueError("duplicate positions")
        return cls(n, flat)

    def __len__(self) -> int:
        return int(self.flat.size)

    @property
    def rows(self) -> np.ndarray:
        return self.flat // self.n

    @property
    def cols(self) -> np.ndarray:
        return self.flat % self.n

    def positions(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(self.rows, self.cols)]

    def mask(self) -> np.ndarray:
        m = np.zeros(self.n * self.n, dtype=bool)
        m[self.flat] = True
        return m.reshape(self.n, self.n)


def sample_indices(mode, n: int, r: int, rng: np.random.Generator | None = None) -> IndexSet:
    """Select ``r * n`` positions of an ``n x n`` output.

    uniform-random
        a uniformly random subset drawn without replacement. Every position
        is included with probability exactly ``r / n``.
    first-rows
        every position of rows ``0 .. r-1``; consumes no randomness.
    all
        every position; requires ``r == n``.
    """
    mode = SamplerMode(mode)
    if not is_power_of_two(n):
        raise ValueError(f"n must be a power of two, got {n}")
    if not 1 <= r <= n:
        raise ValueError(f"r must satisfy 1 <= r <= n={n}, got {r}")
    if mode is SamplerMode.ALL:
        if r != n:
            raise ValueError(f"sampler 'all' requires r == n, got r={r}, n={n}")
        return IndexSet(n, np.arange(n * n))
    if mode is SamplerMode.FIRST_ROWS:
        return IndexSet(n, np.arange(r * n))
    if rng is None:
        raise ValueError("uniform-random sampling needs a random generator")
    # Generator.choice without replacement is a partial Fisher-Yates (tail) shuffle
    flat = rng.choice(n * n, size=r * n, replace=False, shuffle=False)
    flat.sort()
    return IndexSet(n, flat)
